#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "psmm/privacy.hpp"

using namespace psmm;

namespace {

const FieldSpec kF5(5);

std::vector<FieldElement> audit_points(std::size_t n, const FieldSpec& f) {
    std::vector<FieldElement> pts;
    for (std::size_t i = 0; i < n; ++i) pts.emplace_back(i + 1, f);
    return pts;
}

std::pair<FieldMatrix, FieldMatrix> audit_secrets(std::uint64_t seed, std::size_t m,
                                                  const FieldSpec& f) {
    RngStream ra(seed, "audit-a");
    RngStream rb(seed, "audit-b");
    return {random_matrix(m, m, f, ra), random_matrix(m, m, f, rb)};
}

}  // namespace

TEST_CASE("coalition below threshold sees an exactly uniform view (p=5, m=2, k=2, t=2)") {
    const SharingParams params(2, 2, 2);
    const auto [a, b] = audit_secrets(17, 2, kF5);
    const auto points = audit_points(2, kF5);

    const ViewDistribution dist =
        enumerate_view_distribution(params, kF5, a, b, {1}, points);
    CHECK(dist.total == 625);  // 5^4 mask assignments
    CHECK(dist.histogram.size() == 625);  // masks -> view is a bijection
    CHECK(dist.uniform());
}

TEST_CASE("coalition views are independent of the secrets below threshold") {
    const SharingParams params(2, 2, 2);
    const auto s1 = audit_secrets(17, 2, kF5);
    const auto s2 = audit_secrets(18, 2, kF5);
    REQUIRE(s1.first != s2.first);
    const auto points = audit_points(1, kF5);

    const IndependenceReport r = assert_secret_independence(params, kF5, s1, s2, {0}, points);
    CHECK(r.independent);

    const IndependenceReport same = assert_secret_independence(params, kF5, s1, s1, {0}, points);
    CHECK(same.independent);
}

TEST_CASE("coalition of size t demonstrates the threshold is tight") {
    const SharingParams params(2, 2, 2);
    const auto s1 = audit_secrets(17, 2, kF5);
    const auto s2 = audit_secrets(18, 2, kF5);
    const auto points = audit_points(2, kF5);

    const IndependenceReport r =
        assert_secret_independence(params, kF5, s1, s2, {0, 1}, points);
    CHECK_FALSE(r.independent);
    REQUIRE(r.differing_view.has_value());
}

TEST_CASE("degenerate coalitions") {
    const SharingParams params(2, 2, 2);
    const auto [a, b] = audit_secrets(3, 2, kF5);
    const auto points = audit_points(2, kF5);

    // Empty coalition: a single empty view observed on every assignment.
    const ViewDistribution empty =
        enumerate_view_distribution(params, kF5, a, b, {}, points);
    CHECK(empty.total == 625);
    CHECK(empty.histogram.size() == 1);
    CHECK(empty.uniform());

    // t = 1: no masks at all, one deterministic view; the auditor reports
    // this as vacuous privacy.
    const SharingParams unmasked(2, 2, 1);
    const ViewDistribution det =
        enumerate_view_distribution(unmasked, kF5, a, b, {0}, points);
    CHECK(det.total == 1);
    CHECK(det.histogram.size() == 1);
}

TEST_CASE("budget guard") {
    const SharingParams params(2, 2, 2);
    const auto [a, b] = audit_secrets(4, 2, kF5);
    const auto points = audit_points(1, kF5);
    CHECK_THROWS_AS(
        enumerate_view_distribution(params, kF5, a, b, {0}, points, /*budget=*/100),
        BudgetError);
}

TEST_CASE("masking bijection check") {
    // t = 2, 1x1 blocks: the degree-0 identity map.
    const BijectionReport r1 =
        masking_bijection_check(kF5, 2, 1, 1, audit_points(1, kF5));
    CHECK(r1.bijective);
    CHECK(r1.domain_size == 5);

    // t = 3, 1x1 blocks, points {1, 2}.
    const BijectionReport r2 =
        masking_bijection_check(kF5, 3, 1, 1, audit_points(2, kF5));
    CHECK(r2.bijective);
    CHECK(r2.domain_size == 25);
    CHECK(r2.image_size == 25);

    // Repeated evaluation points destroy injectivity, and the check says so.
    const std::vector<FieldElement> repeated{FieldElement(1, kF5), FieldElement(1, kF5)};
    const BijectionReport bad = masking_bijection_check(kF5, 3, 1, 1, repeated);
    CHECK_FALSE(bad.bijective);
    CHECK(bad.image_size < bad.domain_size);

    for (std::uint64_t p : {3ull, 5ull, 7ull}) {
        const FieldSpec f(p);
        for (std::size_t t : {2, 3}) {
            const auto pts = audit_points(t - 1, f);
            CHECK(masking_bijection_check(f, t, 1, 1, pts).bijective);
            CHECK(masking_bijection_check(f, t, 2, 1, pts).bijective);
        }
    }

    CHECK_THROWS_AS(masking_bijection_check(kF5, 1, 1, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(masking_bijection_check(kF5, 3, 4, 4, audit_points(2, kF5)), BudgetError);
}

TEST_CASE("postprocessing invariance") {
    const FieldSpec f(FieldSpec::kDefaultPrime);
    RngStream rng(5, "shares");
    const AgentShare share{0, FieldElement(3, f), random_matrix(8, 4, f, rng),
                           random_matrix(8, 4, f, rng)};

    CHECK_NOTHROW(postprocessing_invariance(OperatorChoice::dense(), share));
    CHECK_NOTHROW(postprocessing_invariance(OperatorChoice::scheme(strassen_scheme(), 1), share));

    // An operator that draws randomness is flagged.
    const auto adversarial = [](const AgentShare& s) {
        RngStream r(0, "adversarial");
        FieldMatrix noise = random_matrix(s.share_a.cols(), s.share_b.cols(), s.share_a.field(), r);
        MultCounter scratch;
        return matmul_naive(transpose(s.share_a), s.share_b, scratch);
    };
    CHECK_THROWS_AS(postprocessing_invariance(adversarial, share), PrivacyViolation);
}
