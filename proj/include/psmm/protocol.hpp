#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "psmm/bilinear.hpp"
#include "psmm/sharing.hpp"

namespace psmm {

/// Local multiplication operator: dense schoolbook, or a verified bilinear
/// scheme ((2,2,2) schemes are lifted blockwise to the given depth; schemes
/// whose dims match the local product exactly are applied flat).
class OperatorChoice {
public:
    static OperatorChoice dense() { return OperatorChoice{}; }
    static OperatorChoice scheme(BilinearScheme s, std::size_t depth);

    bool is_dense() const noexcept { return !scheme_.has_value(); }
    const BilinearScheme& scheme_ref() const { return scheme_.value(); }
    std::size_t depth() const noexcept { return depth_; }

private:
    OperatorChoice() = default;

    std::optional<BilinearScheme> scheme_;
    std::size_t depth_ = 0;
};

/// Known s-dimensional linear constraint on the target blocks:
/// Z_{i,j} = sum_l gamma[(i-1)+k(j-1), l] * Lambda_l for latent blocks
/// Lambda_1..Lambda_s. gamma is k^2 x s and must have full column rank.
class DofConstraint {
public:
    DofConstraint(std::size_t k, FieldMatrix gamma);

    std::size_t k() const noexcept { return k_; }
    std::size_t s() const noexcept { return gamma_.cols(); }
    const FieldMatrix& gamma() const noexcept { return gamma_; }

    /// s = 1: every Z_{i,j} equals one latent block.
    static DofConstraint all_equal(std::size_t k, FieldSpec field);
    /// s = k: Z_{i,j} depends only on the block-row index i (all B_j equal).
    static DofConstraint row_latent(std::size_t k, FieldSpec field);
    /// s = k^2: no reduction; decoding matches the plain reconstruction.
    static DofConstraint identity(std::size_t k, FieldSpec field);

private:
    std::size_t k_;
    FieldMatrix gamma_;
};

struct ProtocolConfig {
    SharingParams params;
    std::size_t n_agents;
    FieldSpec field;
    std::uint64_t seed;
    OperatorChoice op;
    std::optional<DofConstraint> dof;

    void validate() const;  // throws ConfigError
};

struct AgentShare {
    std::size_t agent_id;
    FieldElement alpha;  // public, distinct, nonzero
    FieldMatrix share_a;
    FieldMatrix share_b;
};

struct AgentResult {
    std::size_t agent_id;
    FieldElement alpha;
    FieldMatrix m_eval;
    std::uint64_t mults = 0;
    std::uint64_t upload_elements = 0;
    std::uint64_t download_elements = 0;
};

struct DecoderContext {
    SharingParams params;
    FieldSpec field;
    std::vector<FieldElement> points;
    std::vector<std::uint64_t> support;  // sorted exponent union
    std::optional<DofConstraint> dof;
};

struct DealOutput {
    std::vector<AgentShare> shares;
    DecoderContext ctx;
    MultCounter dealer;
};

/// Partitions, masks and encodes the secrets, then picks distinct nonzero
/// evaluation points whose decode system is full rank (sequential candidates
/// first, seeded resampling on failure).
DealOutput deal_shares(const ProtocolConfig& config, const FieldMatrix& a, const FieldMatrix& b);

/// One agent's local product share_a^T * share_b under the chosen operator.
AgentResult agent_compute(const AgentShare& share, const OperatorChoice& op, MultCounter& counter);

/// Solves the blockwise generalized Vandermonde system, extracts the k^2
/// target coefficients and stacks them into the m x m product A^T B.
FieldMatrix reconstruct(const std::vector<AgentResult>& results, const DecoderContext& ctx,
                        MultCounter* counter = nullptr);

struct DofReconstruction {
    FieldMatrix product;
    /// False when surplus equations contradict the constraint (inputs were
    /// not actually in the declared subspace).
    bool residual_ok = true;
    /// Number of equations actually consumed: the empirical minimal N.
    std::size_t n_used = 0;
};

/// Reduced decoding: solves for the s latent blocks plus the masked
/// coefficients only, then re-expands the targets through gamma.
DofReconstruction reconstruct_dof(const std::vector<AgentResult>& results,
                                  const DecoderContext& ctx, const DofConstraint& dof,
                                  MultCounter* counter = nullptr);

/// Exact unknown count of the (possibly reduced) entrywise system: the
/// minimal N for generic points. Without DOF this is the support size.
std::size_t min_agents_empirical(std::size_t k, std::size_t t,
                                 std::optional<std::size_t> dof_s = std::nullopt);

/// Per-run communication and computation accounting. Uploads and downloads
/// are one encoded-share pair in and one product evaluation out per agent,
/// independent of N.
struct Transcript {
    std::size_t n_agents = 0;
    std::uint64_t bits_per_element = 0;
    std::vector<std::uint64_t> upload_elements;    // per agent
    std::vector<std::uint64_t> download_elements;  // per agent
    std::vector<std::uint64_t> agent_mults;        // per agent
    MultCounter dealer;
    MultCounter agents;
    MultCounter decoder;
    std::size_t n_used_decode = 0;
    std::optional<bool> dof_residual_ok;

    std::uint64_t total_mults() const noexcept {
        return dealer.scalar_mults + agents.scalar_mults + decoder.scalar_mults;
    }
    std::uint64_t upload_bytes_per_agent() const noexcept;
    std::uint64_t download_bytes_per_agent() const noexcept;
};

struct ProtocolRun {
    FieldMatrix product;
    Transcript transcript;
};

/// Deal -> per-agent local computation -> reconstruction, with full
/// accounting. Output is independent of agent scheduling.
ProtocolRun run_protocol(const ProtocolConfig& config, const FieldMatrix& a,
                         const FieldMatrix& b);

}  // namespace psmm
