#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>

#include "psmm/cli.hpp"

namespace {

// Exit codes: 0 success, 2 validation/check failure, 3 I/O, 4 budget.
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitBudget = 4;

/// Output stream selector: --out FILE or stdout.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw std::ios_base::failure("cannot open output file: " + path);
    }

    std::ostream& stream() { return file_ ? *file_ : std::cout; }

    void finish() {
        if (file_) {
            file_->flush();
            if (!*file_) throw std::ios_base::failure("error writing output file");
        }
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perfectly secure matrix multiplication: simulator and experiment harness"};
    app.require_subcommand(1);

    std::string out_path;
    psmm::cli::ThresholdsOptions thresholds_opt;
    auto* thresholds = app.add_subcommand("thresholds", "Agent-count comparison table (CSV)");
    thresholds->add_option("--k", thresholds_opt.k_list, "storage splits k")
        ->delimiter(',')
        ->required();
    thresholds->add_option("--t", thresholds_opt.t_list, "privacy thresholds t")
        ->delimiter(',')
        ->required();
    thresholds->add_option("--out", out_path, "output CSV path (default stdout)");

    psmm::cli::SimulateOptions sim_opt;
    std::string op_name = "dense";
    double bgw_factor = 2.0;
    auto* simulate = app.add_subcommand("simulate", "End-to-end protocol run (CSV report)");
    simulate->add_option("--m", sim_opt.m, "matrix dimension")->required();
    simulate->add_option("--k", sim_opt.k, "storage split")->required();
    simulate->add_option("--t", sim_opt.t, "privacy threshold")->required();
    simulate->add_option("--n", [&sim_opt](const CLI::results_t& res) {
        sim_opt.n = std::stoull(res[0]);
        return true;
    }, "agent count (default: exact unknown count)");
    simulate->add_option("--seed", sim_opt.seed, "master seed");
    simulate->add_option("--prime", sim_opt.prime, "field modulus (prime)");
    simulate->add_option("--operator", op_name, "local operator")
        ->check(CLI::IsMember({"dense", "strassen"}));
    simulate->add_option("--depth", sim_opt.depth, "recursion depth for lifted schemes");
    simulate->add_option("--scheme", sim_opt.scheme_path, "bilinear scheme file");
    simulate->add_option("--dof-s", [&sim_opt](const CLI::results_t& res) {
        sim_opt.dof_s = std::stoull(res[0]);
        return true;
    }, "decode s latent blocks (synthetic families: 1, k, k^2)");
    auto* bgw_flag = simulate->add_option("--bgw-factor", bgw_factor,
                                          "add a modeled BGW bytes column (constant factor)");
    simulate->add_option("--out", out_path, "output CSV path (default stdout)");

    psmm::cli::ComplexityOptions cx_opt;
    auto* complexity = app.add_subcommand("complexity", "Cost-model comparison (CSV)");
    complexity->add_option("--m", cx_opt.m_list, "matrix dimensions")->delimiter(',')->required();
    complexity->add_option("--k", cx_opt.k, "storage split");
    complexity->add_option("--t", cx_opt.t, "privacy threshold");
    complexity->add_option("--tl", cx_opt.tl_list, "learned ranks T_l")
        ->delimiter(',')
        ->required();
    complexity->add_flag("--measure", cx_opt.measure,
                         "also run small instances (m <= 64) and report counters");
    complexity->add_option("--depth", cx_opt.depth, "Strassen lift depth for --measure");
    complexity->add_option("--prime", cx_opt.prime, "field modulus (prime)");
    complexity->add_option("--seed", cx_opt.seed, "master seed");
    complexity->add_option("--out", out_path, "output CSV path (default stdout)");

    psmm::cli::PrivacyAuditOptions audit_opt;
    auto* audit = app.add_subcommand("privacy-audit", "Exhaustive coalition-view audit");
    audit->add_option("--prime", audit_opt.prime, "small audit prime");
    audit->add_option("--m", audit_opt.m, "matrix dimension")->required();
    audit->add_option("--k", audit_opt.k, "storage split")->required();
    audit->add_option("--t", audit_opt.t, "privacy threshold")->required();
    audit->add_option("--coalition", audit_opt.coalition, "coalition size")->required();
    audit->add_option("--seed", audit_opt.seed, "master seed");
    audit->add_option("--budget", audit_opt.budget, "enumeration budget");

    psmm::cli::SchemeVerifyOptions verify_opt;
    auto* verify = app.add_subcommand("scheme-verify", "Verify a bilinear scheme file");
    verify->add_option("--scheme", verify_opt.path, "scheme file")->required();
    verify->add_option("--prime", verify_opt.prime, "field modulus (prime)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: category=validation " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        if (*thresholds) {
            OutputTarget target(out_path);
            const int rc = psmm::cli::cmd_thresholds(thresholds_opt, target.stream());
            target.finish();
            return rc;
        }
        if (*simulate) {
            if (!sim_opt.scheme_path.empty()) {
                sim_opt.op = psmm::cli::OperatorKind::SchemeFile;
            } else if (op_name == "strassen") {
                sim_opt.op = psmm::cli::OperatorKind::Strassen;
            }
            if (bgw_flag->count() > 0) sim_opt.bgw_factor = bgw_factor;
            OutputTarget target(out_path);
            const int rc = psmm::cli::cmd_simulate(sim_opt, target.stream(), std::cerr);
            target.finish();
            return rc;
        }
        if (*complexity) {
            OutputTarget target(out_path);
            const int rc = psmm::cli::cmd_complexity(cx_opt, target.stream());
            target.finish();
            return rc;
        }
        if (*audit) return psmm::cli::cmd_privacy_audit(audit_opt, std::cout);
        if (*verify) return psmm::cli::cmd_scheme_verify(verify_opt, std::cout);
    } catch (const psmm::BudgetError& e) {
        std::cerr << "error: category=budget " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: category=io " << e.what() << '\n';
        return kExitIo;
    } catch (const psmm::Error& e) {
        std::cerr << "error: category=validation " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: category=validation " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}
