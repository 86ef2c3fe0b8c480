#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "psmm/cli.hpp"
#include "psmm/privacy.hpp"
#include "psmm/protocol.hpp"

namespace py = pybind11;
using namespace psmm;

namespace {

py::list matrix_to_list(const FieldMatrix& m) {
    py::list rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < m.cols(); ++j) row.append(m(i, j));
        rows.append(row);
    }
    return rows;
}

py::dict support_sets(std::size_t k, std::size_t t) {
    const SupportSets s = symbolic_product_support(k, t);
    py::dict d;
    d["k1"] = s.k1;
    d["k2"] = s.k2;
    d["k3"] = s.k3;
    d["k4"] = s.k4;
    d["support"] = s.support;
    d["size"] = s.size();
    return d;
}

py::dict simulate(std::size_t m, std::size_t k, std::size_t t, std::uint64_t seed,
                  std::uint64_t prime, const std::string& op, std::size_t depth,
                  std::optional<std::size_t> n, std::optional<std::size_t> dof_s,
                  std::optional<std::string> scheme) {
    cli::SimulateOptions opt;
    opt.m = m;
    opt.k = k;
    opt.t = t;
    opt.seed = seed;
    opt.prime = prime;
    opt.depth = depth;
    opt.n = n;
    opt.dof_s = dof_s;
    if (scheme) {
        opt.op = cli::OperatorKind::SchemeFile;
        opt.scheme_path = *scheme;
    } else if (op == "strassen") {
        opt.op = cli::OperatorKind::Strassen;
    } else if (op != "dense") {
        throw std::invalid_argument("operator must be 'dense' or 'strassen'");
    }

    const cli::SimulateReport r = cli::run_simulate(opt);
    py::dict d;
    d["correct"] = r.correct;
    d["n"] = r.n;
    d["operator"] = r.operator_name;
    d["upload_bytes_per_agent"] = r.upload_bytes_per_agent;
    d["download_bytes_per_agent"] = r.download_bytes_per_agent;
    d["total_mults"] = r.total_mults;
    d["product"] = matrix_to_list(*r.product);
    if (r.dof_n_empirical) {
        py::dict dof;
        dof["s"] = *dof_s;
        dof["n_empirical"] = *r.dof_n_empirical;
        dof["closed_form_bound"] = *r.dof_struct_bound;
        dof["residual_ok"] = r.dof_residual_ok.value_or(true);
        d["dof"] = dof;
    }
    return d;
}

py::dict privacy_audit(std::uint64_t prime, std::size_t m, std::size_t k, std::size_t t,
                       std::size_t coalition, std::uint64_t seed, std::uint64_t budget) {
    const FieldSpec field(prime);
    const SharingParams params(m, k, t);

    std::vector<FieldElement> points;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < coalition; ++i) {
        points.emplace_back(i + 1, field);
        members.push_back(i);
    }
    RngStream r1a(seed, "audit-secret-1a"), r1b(seed, "audit-secret-1b");
    RngStream r2a(seed, "audit-secret-2a"), r2b(seed, "audit-secret-2b");
    const auto s1 = std::make_pair(random_matrix(m, m, field, r1a),
                                   random_matrix(m, m, field, r1b));
    const auto s2 = std::make_pair(random_matrix(m, m, field, r2a),
                                   random_matrix(m, m, field, r2b));

    const ViewDistribution dist = enumerate_view_distribution(params, field, s1.first, s1.second,
                                                              members, points, budget);
    const IndependenceReport indep =
        assert_secret_independence(params, field, s1, s2, members, points, budget);

    py::dict d;
    d["assignments"] = dist.total;
    d["distinct_views"] = dist.histogram.size();
    d["uniform"] = dist.uniform();
    d["independent"] = indep.independent;
    d["vacuous"] = (t == 1);
    return d;
}

py::dict verify_scheme_file(const std::string& path, std::uint64_t prime) {
    const FieldSpec field(prime);
    std::ifstream in(path);
    if (!in) throw SchemeParseError("cannot open scheme file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    BilinearScheme scheme = parse_scheme(buf.str());
    const VerifyResult r = verify_scheme(scheme, field);

    py::dict d;
    d["ok"] = r.pass;
    d["rank"] = scheme.rank();
    d["dims"] = py::make_tuple(scheme.dims().a, scheme.dims().b, scheme.dims().c);
    d["characteristic"] = scheme.characteristic();
    d["characteristic_mismatch"] = r.characteristic_mismatch;
    d["magnitude_warning"] = r.coefficient_magnitude_warning;
    d["message"] = r.message;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Perfectly secure matrix multiplication over prime fields";

    mod.def("threshold_closed_form", &threshold_closed_form, py::arg("k"), py::arg("t"),
            "min{2k^2+2t-3, k^2+kt+t-2}: agents needed by the polynomial-sharing scheme");
    mod.def("bgw_threshold", &bgw_threshold, py::arg("k"), py::arg("t"),
            "k^2(2t-1): BGW-style job-splitting baseline");
    mod.def("struct_threshold", &struct_threshold, py::arg("k"), py::arg("t"), py::arg("s"),
            "min{2s+2t-3, s+ks+t-2}: reported bound under an s-dimensional target subspace");
    mod.def("support_sets", &support_sets, py::arg("k"), py::arg("t"),
            "exponent support of the product polynomial, split into K1..K4");
    mod.def("min_agents", &min_agents_empirical, py::arg("k"), py::arg("t"),
            py::arg("dof_s") = std::nullopt,
            "exact unknown count of the (possibly DOF-reduced) decode system");
    mod.def("simulate", &simulate, py::arg("m"), py::arg("k"), py::arg("t"), py::arg("seed") = 1,
            py::arg("prime") = FieldSpec::kDefaultPrime, py::arg("operator") = "dense",
            py::arg("depth") = 1, py::arg("n") = std::nullopt, py::arg("dof_s") = std::nullopt,
            py::arg("scheme") = std::nullopt,
            "run the protocol end to end and report correctness plus accounting");
    mod.def("privacy_audit", &privacy_audit, py::arg("prime") = 5, py::arg("m") = 2,
            py::arg("k") = 2, py::arg("t") = 2, py::arg("coalition") = 1, py::arg("seed") = 1,
            py::arg("budget") = kDefaultEnumerationBudget,
            "exhaustive coalition-view audit on a small field");
    mod.def("verify_scheme_file", &verify_scheme_file, py::arg("path"),
            py::arg("prime") = FieldSpec::kDefaultPrime,
            "parse a scheme file and run the full basis-pair verification");
}
