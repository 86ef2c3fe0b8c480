#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "psmm/protocol.hpp"

namespace psmm {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

/// Exact count of every view a coalition can observe, over all mask
/// assignments. No sampling anywhere: privacy here is a combinatorial
/// statement and is checked as one.
struct ViewDistribution {
    /// Serialized view -> exact occurrence count. Serialization is the
    /// row-major entry sequence of (alpha, share_a, share_b) per coalition
    /// member in agent-id order.
    std::map<std::vector<std::uint64_t>, std::uint64_t> histogram;
    std::uint64_t total = 0;

    bool uniform() const;
};

/// Enumerates ALL mask assignments for the given secrets and records the
/// coalition's exact view each time. points[i] is agent i's public point;
/// coalition holds agent ids. Throws BudgetError when p^(#mask scalars)
/// exceeds the budget.
ViewDistribution enumerate_view_distribution(const SharingParams& params, const FieldSpec& field,
                                             const FieldMatrix& a, const FieldMatrix& b,
                                             const std::vector<std::size_t>& coalition,
                                             const std::vector<FieldElement>& points,
                                             std::uint64_t budget = kDefaultEnumerationBudget);

struct IndependenceReport {
    bool independent = false;
    /// A view whose count differs between the two secret pairs, when any.
    std::optional<std::vector<std::uint64_t>> differing_view;
};

/// Compares the exact view distributions induced by two secret pairs.
IndependenceReport assert_secret_independence(const SharingParams& params, const FieldSpec& field,
                                              const std::pair<FieldMatrix, FieldMatrix>& secrets1,
                                              const std::pair<FieldMatrix, FieldMatrix>& secrets2,
                                              const std::vector<std::size_t>& coalition,
                                              const std::vector<FieldElement>& points,
                                              std::uint64_t budget = kDefaultEnumerationBudget);

struct BijectionReport {
    bool bijective = false;
    std::uint64_t domain_size = 0;
    std::uint64_t image_size = 0;
};

/// Enumerates all coefficient tuples of g(x) = sum_{l=1}^{t-1} M_l x^{l-1}
/// over (block_rows x block_cols) blocks and checks that evaluation at the
/// given t-1 points is injective (hence bijective by cardinality).
BijectionReport masking_bijection_check(const FieldSpec& field, std::size_t t,
                                        std::size_t block_rows, std::size_t block_cols,
                                        const std::vector<FieldElement>& points,
                                        std::uint64_t budget = kDefaultEnumerationBudget);

/// Asserts that an agent-side operator is a deterministic function of the
/// share alone: recomputation reproduces the output bit-exactly and no
/// randomness is drawn while it runs. Throws PrivacyViolation otherwise.
void postprocessing_invariance(const std::function<FieldMatrix(const AgentShare&)>& op,
                               const AgentShare& share);
void postprocessing_invariance(const OperatorChoice& op, const AgentShare& share);

}  // namespace psmm
