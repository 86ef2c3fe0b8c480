// Acceptance suite: every release criterion runs here at its stated
// tolerance and prints exactly one PASS/FAIL line. Exits nonzero when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "psmm/cli.hpp"
#include "psmm/privacy.hpp"
#include "psmm/protocol.hpp"
#include "support_oracle.hpp"

using namespace psmm;

namespace {

struct Checker {
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

int g_failed = 0;

void criterion(int number, const std::string& name, double budget_seconds,
               const std::function<void(Checker&)>& body) {
    Checker check;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0 && elapsed >= budget_seconds) {
        check.failures.push_back("runtime " + std::to_string(elapsed) + "s exceeds budget " +
                                 std::to_string(budget_seconds) + "s");
    }
    if (check.failures.empty()) {
        std::printf("[PASS] criterion %d: %s (%.2fs)\n", number, name.c_str(), elapsed);
    } else {
        ++g_failed;
        std::printf("[FAIL] criterion %d: %s (%.2fs)\n", number, name.c_str(), elapsed);
        for (const auto& f : check.failures) std::printf("       - %s\n", f.c_str());
    }
    std::fflush(stdout);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream linein(line);
        std::string field;
        while (std::getline(linein, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

const FieldSpec kBig(FieldSpec::kDefaultPrime);

std::pair<FieldMatrix, FieldMatrix> seeded_secrets(std::size_t m, std::uint64_t seed,
                                                   const FieldSpec& f = kBig) {
    RngStream ra(seed, "secret-a");
    RngStream rb(seed, "secret-b");
    return {random_matrix(m, m, f, ra), random_matrix(m, m, f, rb)};
}

void criterion1_thresholds(Checker& check) {
    const std::vector<std::size_t> ks{2, 4, 8, 16, 32};
    const std::vector<std::size_t> ts{2, 4, 8, 16};
    std::ostringstream out;
    cli::cmd_thresholds({ks, ts}, out);
    const auto rows = parse_csv(out.str());
    check.require(rows.size() == 1 + ks.size() * ts.size(), "row count");

    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::uint64_t, std::uint64_t>> table;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::size_t k = std::stoull(r[0]), t = std::stoull(r[1]);
        const std::uint64_t ours = std::stoull(r[2]), bgw = std::stoull(r[3]);
        const std::uint64_t exact = std::stoull(r[4]);
        table[{k, t}] = {ours, bgw};
        check.require(ours < bgw, "n_ours < n_bgw at k=" + r[0] + " t=" + r[1]);
        check.require(exact <= ours, "n_exact <= n_ours at k=" + r[0] + " t=" + r[1]);
    }
    check.require(table.at({8, 4}).first == 98, "N_ours(8,4) == 98");
    check.require(table.at({8, 4}).second == 448, "N_bgw(8,4) == 448");
    check.require(table.at({8, 8}).first == 134, "N_ours(8,8) == 134");

    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        for (std::size_t ti = 0; ti < ts.size(); ++ti) {
            const auto [ours, bgw] = table.at({ks[ki], ts[ti]});
            const std::uint64_t gap = bgw - ours;
            if (ki > 0) {
                const auto [po, pb] = table.at({ks[ki - 1], ts[ti]});
                check.require(gap >= pb - po, "gap non-decreasing in k");
            }
            if (ti > 0) {
                const auto [po, pb] = table.at({ks[ki], ts[ti - 1]});
                check.require(gap >= pb - po, "gap non-decreasing in t");
            }
        }
    }
}

void criterion2_support(Checker& check) {
    for (std::size_t k = 1; k <= 6; ++k) {
        for (std::size_t t = 1; t <= 6; ++t) {
            const std::string at = " at k=" + std::to_string(k) + " t=" + std::to_string(t);
            const SupportSets sets = symbolic_product_support(k, t);
            const test::SymbolicProduct oracle = test::symbolic_product(k, t);

            std::vector<std::uint64_t> oracle_support;
            for (const auto& [e, terms] : oracle) oracle_support.push_back(e);
            std::set<std::uint64_t> closed_union(sets.k1.begin(), sets.k1.end());
            closed_union.insert(sets.k2.begin(), sets.k2.end());
            closed_union.insert(sets.k3.begin(), sets.k3.end());
            closed_union.insert(sets.k4.begin(), sets.k4.end());

            check.require(sets.support ==
                              std::vector<std::uint64_t>(closed_union.begin(), closed_union.end()),
                          "union equals K1|K2|K3|K4" + at);
            check.require(sets.support == oracle_support, "symbolic support equals union" + at);
            check.require(sets.size() <= threshold_closed_form(k, t), "size within bound" + at);

            for (std::size_t i = 1; i <= k; ++i) {
                for (std::size_t j = 1; j <= k; ++j) {
                    const auto& terms = oracle.at((i - 1) + k * (j - 1));
                    check.require(terms.size() == 1 && !terms.begin()->has_mask() &&
                                      terms.begin()->left == "A" + std::to_string(i) &&
                                      terms.begin()->right == "B" + std::to_string(j),
                                  "K1 coefficient is exactly A_i^T B_j" + at);
                }
            }
            for (const auto& [e, terms] : oracle) {
                if (e < k * k) continue;
                for (const auto& term : terms) {
                    check.require(term.has_mask(), "non-K1 coefficient carries a mask" + at);
                }
            }
        }
    }
}

void criterion3_end_to_end(Checker& check) {
    const std::vector<std::array<std::size_t, 3>> configs{
        {4, 2, 2}, {8, 2, 3}, {16, 4, 2}, {8, 4, 2}};
    for (const auto& [m, k, t] : configs) {
        const std::size_t n = min_agents_empirical(k, t);
        const std::string at =
            " at (m,k,t)=(" + std::to_string(m) + "," + std::to_string(k) + "," +
            std::to_string(t) + ")";
        for (std::uint64_t trial = 0; trial < 100; ++trial) {
            const std::uint64_t seed = 1000 * m + 100 * k + 10 * t + trial;
            const auto [a, b] = seeded_secrets(m, seed);
            const ProtocolConfig config{SharingParams(m, k, t), n, kBig, seed,
                                        OperatorChoice::dense(), std::nullopt};
            const DealOutput deal = deal_shares(config, a, b);
            std::vector<AgentResult> results;
            MultCounter counter;
            for (const AgentShare& s : deal.shares) {
                results.push_back(agent_compute(s, OperatorChoice::dense(), counter));
            }
            if (reconstruct(results, deal.ctx) != matmul_naive(transpose(a), b)) {
                check.require(false, "exact reconstruction" + at + " trial " +
                                         std::to_string(trial));
                break;
            }
            results.pop_back();
            bool refused = false;
            try {
                reconstruct(results, deal.ctx);
            } catch (const InsufficientShares&) {
                refused = true;
            }
            if (!refused) {
                check.require(false, "N-1 decode refused" + at);
                break;
            }
        }
    }
}

void criterion4_operator_invariance(Checker& check) {
    for (const auto& [m, k] : std::vector<std::pair<std::size_t, std::size_t>>{{16, 2}, {32, 4}}) {
        const std::string at = " at (m,k)=(" + std::to_string(m) + "," + std::to_string(k) + ")";
        const std::size_t t = 2;
        const std::uint64_t seed = 9000 + m;
        const auto [a, b] = seeded_secrets(m, seed);
        const std::size_t n = min_agents_empirical(k, t);

        const ProtocolConfig dense_cfg{SharingParams(m, k, t), n, kBig, seed,
                                       OperatorChoice::dense(), std::nullopt};
        const DealOutput deal = deal_shares(dense_cfg, a, b);
        std::vector<AgentResult> dense_results;
        MultCounter dense_counter;
        for (const AgentShare& s : deal.shares) {
            dense_results.push_back(agent_compute(s, OperatorChoice::dense(), dense_counter));
        }
        const FieldMatrix dense_product = reconstruct(dense_results, deal.ctx);
        check.require(dense_product == matmul_naive(transpose(a), b), "dense correctness" + at);

        for (std::size_t depth : {1, 2}) {
            const OperatorChoice lifted = OperatorChoice::scheme(strassen_scheme(), depth);
            const std::uint64_t want_blocks = static_cast<std::uint64_t>(std::pow(7, depth));
            std::vector<AgentResult> lifted_results;
            for (std::size_t i = 0; i < deal.shares.size(); ++i) {
                MultCounter c;
                AgentResult r = agent_compute(deal.shares[i], lifted, c);
                check.require(c.block_mults == want_blocks,
                              "7^d base block products at depth " + std::to_string(depth) + at);
                check.require(r.m_eval == dense_results[i].m_eval,
                              "bit-identical agent output at depth " + std::to_string(depth) + at);
                lifted_results.push_back(std::move(r));
            }
            check.require(reconstruct(lifted_results, deal.ctx) == dense_product,
                          "bit-identical final matrix at depth " + std::to_string(depth) + at);
        }
    }
}

void criterion5_beaver(Checker& check) {
    const FieldSpec f101(101);
    RngStream rng(55, "beaver-acceptance");
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t a = 1 + rng.next_below(4);
        const std::size_t b = 1 + rng.next_below(4);
        const std::size_t c = 1 + rng.next_below(4);
        const FieldMatrix x = random_matrix(a, b, f101, rng);
        const FieldMatrix y = random_matrix(b, c, f101, rng);
        const BeaverTriple triple = deal_beaver_triple(a, b, c, 3, f101, rng);
        const AdditiveShares sx = share_additive(x, 3, rng);
        const AdditiveShares sy = share_additive(y, 3, rng);
        if (beaver_multiply(sx, sy, triple).open() != matmul_naive(x, y)) {
            check.require(false, "opened product equals naive at trial " + std::to_string(trial));
            break;
        }
    }

    const FieldSpec f3(3);
    for (std::uint64_t a = 0; a < 3; ++a) {
        for (std::uint64_t b = 0; b < 3; ++b) {
            std::set<std::pair<std::uint64_t, std::uint64_t>> openings;
            for (std::uint64_t r1 = 0; r1 < 3; ++r1) {
                for (std::uint64_t r2 = 0; r2 < 3; ++r2) {
                    openings.emplace(f3.sub(a, r1), f3.sub(b, r2));
                }
            }
            check.require(openings.size() == 9, "(D,E) is a bijection of the masks per secret");
        }
    }
}

void criterion6_privacy(Checker& check) {
    const FieldSpec f5(5);
    const SharingParams params(2, 2, 2);
    RngStream r1a(61, "audit-1a"), r1b(61, "audit-1b");
    RngStream r2a(62, "audit-2a"), r2b(62, "audit-2b");
    const auto s1 = std::make_pair(random_matrix(2, 2, f5, r1a), random_matrix(2, 2, f5, r1b));
    const auto s2 = std::make_pair(random_matrix(2, 2, f5, r2a), random_matrix(2, 2, f5, r2b));
    check.require(s1 != s2, "secret pairs are distinct");
    const std::vector<FieldElement> points{FieldElement(1, f5), FieldElement(2, f5)};

    const ViewDistribution d1 =
        enumerate_view_distribution(params, f5, s1.first, s1.second, {0}, points);
    check.require(d1.total == 625, "5^4 mask assignments enumerated");
    check.require(d1.uniform(), "coalition-of-1 view distribution exactly uniform");
    check.require(d1.histogram.size() == 625, "mask-to-view map is a bijection");

    const IndependenceReport indep =
        assert_secret_independence(params, f5, s1, s2, {0}, points);
    check.require(indep.independent, "coalition-of-1 distributions identical across secrets");

    const IndependenceReport tight =
        assert_secret_independence(params, f5, s1, s2, {0, 1}, points);
    check.require(!tight.independent, "coalition of size t is secret-dependent (tightness)");
}

void criterion7_scheme(Checker& check) {
    for (std::uint64_t p : {101ull, 2147483647ull}) {
        BilinearScheme s = strassen_scheme();
        check.require(s.rank() == 7, "rank 7");
        check.require(s.max_abs_coefficient() <= 1, "coefficients in {-1,0,1}");
        check.require(verify_scheme(s, FieldSpec(p)).pass,
                      "basis-pair verification over p=" + std::to_string(p));
    }

    // Every single-coefficient mutation must flip at least one basis pair.
    const FieldSpec f(101);
    const BilinearScheme ref = strassen_scheme();
    for (char part : {'u', 'v', 'w'}) {
        for (std::size_t r = 0; r < 7; ++r) {
            for (std::size_t idx = 0; idx < 4; ++idx) {
                const auto& row = part == 'u' ? ref.u(r) : part == 'v' ? ref.v(r) : ref.w(r);
                for (std::int64_t value : {-1, 0, 1}) {
                    if (value == row[idx]) continue;
                    BilinearScheme mutated = ref.with_coefficient(part, r, idx, value);
                    if (verify_scheme(mutated, f).pass) {
                        check.require(false, std::string("mutation survived at ") + part + "[" +
                                                 std::to_string(r) + "][" + std::to_string(idx) +
                                                 "]=" + std::to_string(value));
                    }
                }
            }
        }
    }
}

void criterion8_complexity(Checker& check) {
    // Model columns: k=8, t=4 fixes N=98; gain strictly increases with m and
    // the 80% reduction lands exactly at m = 5 k T_l.
    cli::ComplexityOptions model;
    model.k = 8;
    model.t = 4;
    model.tl_list = {2};
    model.m_list = {40, 80, 160, 320, 640};  // includes 5 k T_l = 80
    std::ostringstream out;
    cli::cmd_complexity(model, out);
    const auto rows = parse_csv(out.str());
    long double prev_gain = -1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        check.require(rows[i][3] == "98", "N=98 in every row");
        const long double gain = std::stold(rows[i][7]);
        check.require(gain > prev_gain, "gain strictly increasing in m");
        prev_gain = gain;
        if (rows[i][0] == "80") {
            check.require(rows[i][8] == "80.000000", "80% reduction exactly at m = 5 k T_l");
        }
    }

    // Measured counters: Strassen lifting at depth d must hit the 7^d/8^d
    // block-count model exactly on small instances.
    for (std::size_t depth : {1, 2}) {
        cli::ComplexityOptions measured;
        measured.k = 8;
        measured.t = 4;
        measured.tl_list = {2};
        measured.m_list = {64};
        measured.measure = true;
        measured.depth = depth;
        std::ostringstream mout;
        cli::cmd_complexity(measured, mout);
        const auto mrows = parse_csv(mout.str());
        const std::uint64_t dense = std::stoull(mrows[1][9]);
        const std::uint64_t scheme = std::stoull(mrows[1][10]);
        const std::uint64_t blocks = std::stoull(mrows[1][11]);
        const std::uint64_t pow7 = static_cast<std::uint64_t>(std::pow(7, depth));
        const std::uint64_t pow8 = static_cast<std::uint64_t>(std::pow(8, depth));
        check.require(blocks == pow7, "7^d base products at depth " + std::to_string(depth));
        check.require(scheme * pow8 == dense * pow7,
                      "measured mult ratio is exactly (7/8)^" + std::to_string(depth));
    }
}

void criterion9_dof(Checker& check) {
    // s = 1 synthetic constraint: all Z_{i,j} equal.
    RngStream ra(91, "dof-a"), rb(91, "dof-b");
    const FieldMatrix ablock = random_matrix(4, 2, kBig, ra);
    const FieldMatrix bblock = random_matrix(4, 2, kBig, rb);
    const FieldMatrix a = concat_columns({ablock, ablock});
    const FieldMatrix b = concat_columns({bblock, bblock});
    const FieldMatrix oracle = matmul_naive(transpose(a), b);

    check.require(min_agents_empirical(2, 2) == 8, "unconstrained unknown count is 8");
    check.require(min_agents_empirical(2, 2, 1) == 5, "reduced unknown count is 5");
    check.require(struct_threshold(2, 2, 1) == 3,
                  "closed-form bound reports 3 (discrepancy vs empirical 5 is surfaced)");

    ProtocolConfig config{SharingParams(4, 2, 2), 5, kBig, 91, OperatorChoice::dense(),
                          DofConstraint::all_equal(2, kBig)};
    const ProtocolRun run = run_protocol(config, a, b);
    check.require(run.product == oracle, "DOF reconstruction equals the naive oracle");
    check.require(run.transcript.n_used_decode == 5, "succeeds with N = 5 < 8 results");
    check.require(run.transcript.dof_residual_ok == true, "residual clean on admissible inputs");

    const DealOutput deal = deal_shares(config, a, b);
    std::vector<AgentResult> results;
    MultCounter counter;
    for (const AgentShare& s : deal.shares) {
        results.push_back(agent_compute(s, OperatorChoice::dense(), counter));
    }
    results.pop_back();
    bool refused = false;
    try {
        reconstruct_dof(results, deal.ctx, *config.dof);
    } catch (const InsufficientShares&) {
        refused = true;
    }
    check.require(refused, "decoding refused with N = 4 results");

    // The CLI reports the empirical N next to the closed-form value.
    cli::SimulateOptions sim;
    sim.m = 4;
    sim.k = 2;
    sim.t = 2;
    sim.seed = 91;
    sim.dof_s = 1;
    std::ostringstream out, diag;
    cli::cmd_simulate(sim, out, diag);
    check.require(diag.str().find("n_empirical=5") != std::string::npos &&
                      diag.str().find("closed_form_bound=3") != std::string::npos,
                  "empirical N reported alongside the closed-form value");
}

}  // namespace

int main() {
    criterion(1, "threshold table vs BGW baseline", 1.0, criterion1_thresholds);
    criterion(2, "support calculus vs symbolic oracle (k,t <= 6)", 10.0, criterion2_support);
    criterion(3, "end-to-end exactness, 100 trials x 4 configs", 30.0, criterion3_end_to_end);
    criterion(4, "operator invariance (dense vs Strassen d=1,2)", 0, criterion4_operator_invariance);
    criterion(5, "Beaver identity and mask bijection", 0, criterion5_beaver);
    criterion(6, "exact privacy audit (p=5, coalition 1 and 2)", 10.0, criterion6_privacy);
    criterion(7, "Strassen scheme verification and mutation kill", 0, criterion7_scheme);
    criterion(8, "complexity model and measured 7^d/8^d ratios", 0, criterion8_complexity);
    criterion(9, "DOF-reduced decoding (s=1: N=5 suffices, N=4 refused)", 0, criterion9_dof);

    if (g_failed != 0) {
        std::printf("%d criterion(s) FAILED\n", g_failed);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
