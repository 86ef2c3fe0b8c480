#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psmm/privacy.hpp"
#include "psmm/protocol.hpp"

namespace psmm::cli {

/// Closed-form per-run cost model: dense agents cost m^3/k^2 field
/// multiplications each, tensorized agents T_l products on length-m^2/k
/// vectors, encoding N(k+t)m^2/k, decoding (m/k)^2 N^2.
struct CostModel {
    std::size_t m;
    std::size_t k;
    std::size_t t;
    std::size_t n;
    std::size_t t_l;
    std::uint64_t element_bits;

    unsigned __int128 cost_psmm_total() const;    // N * m^3 / k^2
    unsigned __int128 cost_lapsmm_total() const;  // N * T_l * m^2 / k
    long double gain() const;                     // m / (k * T_l)
    long double reduction_pct() const;            // 100 (m - k T_l) / m
};

std::string u128_to_string(unsigned __int128 v);

struct ThresholdsOptions {
    std::vector<std::size_t> k_list;
    std::vector<std::size_t> t_list;
};

/// CSV: k,t,n_ours,n_bgw,n_exact
int cmd_thresholds(const ThresholdsOptions& opt, std::ostream& out);

enum class OperatorKind { Dense, Strassen, SchemeFile };

struct SimulateOptions {
    std::size_t m = 16;
    std::size_t k = 2;
    std::size_t t = 2;
    std::optional<std::size_t> n;  // default: exact unknown count
    std::uint64_t seed = 1;
    std::uint64_t prime = FieldSpec::kDefaultPrime;
    OperatorKind op = OperatorKind::Dense;
    std::size_t depth = 1;
    std::string scheme_path;
    std::optional<std::size_t> dof_s;      // supported synthetic families: 1, k, k^2
    std::optional<double> bgw_factor;      // adds a modeled BGW bytes column
};

struct SimulateReport {
    bool correct = false;
    std::size_t n = 0;
    std::string operator_name;
    std::uint64_t upload_bytes_per_agent = 0;
    std::uint64_t download_bytes_per_agent = 0;
    std::uint64_t total_mults = 0;
    std::optional<FieldMatrix> product;
    std::optional<std::size_t> dof_n_empirical;
    std::optional<std::size_t> dof_struct_bound;  // Eq.-level closed form, reported verbatim
    std::optional<bool> dof_residual_ok;
};

SimulateReport run_simulate(const SimulateOptions& opt);

/// CSV: m,k,t,n,operator,correct,upload_bytes_per_agent,
///      download_bytes_per_agent,total_mults[,bgw_upload_bytes_per_agent_modeled]
/// DOF details go to diag, never into the CSV.
int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& diag);

struct ComplexityOptions {
    std::vector<std::size_t> m_list;
    std::size_t k = 8;
    std::size_t t = 4;
    std::vector<std::size_t> tl_list;
    bool measure = false;     // run small instances (m <= 64) and report counters
    std::size_t depth = 1;    // Strassen lift depth used by --measure
    std::uint64_t prime = FieldSpec::kDefaultPrime;
    std::uint64_t seed = 1;
};

/// CSV: m,k,t,n,tl,cost_psmm,cost_lapsmm,gain,reduction_pct
///      [,measured_dense_mults,measured_scheme_mults,measured_block_mults]
int cmd_complexity(const ComplexityOptions& opt, std::ostream& out);

struct PrivacyAuditOptions {
    std::uint64_t prime = 5;
    std::size_t m = 2;
    std::size_t k = 2;
    std::size_t t = 2;
    std::size_t coalition = 1;
    std::uint64_t seed = 1;
    std::uint64_t budget = kDefaultEnumerationBudget;
};

int cmd_privacy_audit(const PrivacyAuditOptions& opt, std::ostream& out);

struct SchemeVerifyOptions {
    std::string path;
    std::uint64_t prime = FieldSpec::kDefaultPrime;
};

int cmd_scheme_verify(const SchemeVerifyOptions& opt, std::ostream& out);

}  // namespace psmm::cli
