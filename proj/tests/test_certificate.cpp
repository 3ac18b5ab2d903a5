#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lsr/certificate.hpp"
#include "lsr/spectrum.hpp"

using namespace lsr;
namespace {
constexpr double pi = std::numbers::pi;

// One full forge shared by the tests below (about 8 s of work).
const NonFinitenessCertificate& full_cert() {
    static const NonFinitenessCertificate cert =
        forge_pair(1, 0.32, 1.0, 2, mpq_class(13, 10), 3, {});
    return cert;
}
}  // namespace

TEST_CASE("prime/angle search") {
    auto [a, b, alpha] = select_rational_angle(1, -0.12, 0.05, 50);
    CHECK(a == 6);
    CHECK(b == 13);
    CHECK(alpha == doctest::Approx(-1.0 / std::tan(6 * pi / 13)).epsilon(1e-12));
    CHECK(alpha == doctest::Approx(-0.1224).epsilon(1e-3));

    auto [a2, b2, alpha2] = select_rational_angle(1, 0.32, 0.02, 50);
    CHECK(a2 == -2);
    CHECK(b2 == 5);
    CHECK(alpha2 == doctest::Approx(0.32492).epsilon(1e-4));

    // Unreachable target within a tiny window exhausts the search budget.
    CHECK_THROWS_AS(select_rational_angle(1, 1e9, 1e-6, 50), error);
}

TEST_CASE("forge constructs the expected certificate") {
    const NonFinitenessCertificate& cert = full_cert();
    CHECK(cert.b == 5);
    CHECK(cert.a == -2);
    CHECK(cert.cf_a0 == 1);
    CHECK(cert.seed_len == 3);
    REQUIRE(cert.cf_quotients.size() == 5);
    CHECK(cert.cf_quotients[0].coeff == 1);
    CHECK(cert.cf_quotients[1].coeff == 1);
    CHECK(cert.cf_quotients[2].coeff == 2);
    CHECK(cert.cf_quotients[3].coeff == 12800000);  // smallest multiple of 5 past 20^6
    CHECK(cert.cf_quotients[4].pow10 > 1000000);    // the giant growth quotient
    CHECK(cert.steps_done == 2);
    CHECK(cert.budget_stopped);  // the third step would need ~1e(9e7) digits
    CHECK(cert.growth_floor_C == 32);
    CHECK(cert.checked_to == 1000);
    CHECK(cert.delta_lower.get_d() == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(cert.lsr_floor == doctest::Approx(0.02).epsilon(1e-1));
    CHECK(cert.lsr_floor > 0);
    // theta within eps of the 1.0 target, pinned to a tight interval.
    CHECK(cert.theta.lo.get_d() == doctest::Approx(1.00531).epsilon(1e-4));
    CHECK(mpq_class(cert.theta.hi - cert.theta.lo).get_d() < 1e-8);

    const VerifyReport rep = verify_certificate(cert, 1000);
    CHECK(rep.ok);
    CHECK(rep.failure.empty());

    // Verification of a sub-range also passes.
    CHECK(verify_certificate(cert, 100).ok);
    // Beyond the certified coverage: refused.
    CHECK_FALSE(verify_certificate(cert, 1001).ok);
}

TEST_CASE("certificate json round trip") {
    const NonFinitenessCertificate& cert = full_cert();
    const std::string text = certificate_to_json(cert);
    const NonFinitenessCertificate back = certificate_from_json(text);
    CHECK(back.b == cert.b);
    CHECK(back.a == cert.a);
    CHECK(back.delta_lower == cert.delta_lower);
    CHECK(back.cf_quotients.size() == cert.cf_quotients.size());
    CHECK(back.cf_quotients[4].coeff == cert.cf_quotients[4].coeff);
    CHECK(back.cf_quotients[4].pow10 == cert.cf_quotients[4].pow10);
    CHECK(back.vartheta.lo == cert.vartheta.lo);
    CHECK(verify_certificate(back, 1000).ok);
}

TEST_CASE("tampering with any quotient is detected") {
    const std::string text = certificate_to_json(full_cert());
    for (size_t i = 0; i < full_cert().cf_quotients.size(); ++i) {
        NonFinitenessCertificate bad = certificate_from_json(text);
        bad.cf_quotients[i].coeff -= 1;
        bool detected = false;
        try {
            detected = !verify_certificate(bad, full_cert().checked_to).ok;
        } catch (const error&) {
            detected = true;  // structurally invalid (e.g. quotient dropped to 0)
        }
        CHECK_MESSAGE(detected, "tamper at quotient ", i, " not detected");
    }
    // Tampering a0 shifts every residue.
    NonFinitenessCertificate bad = certificate_from_json(text);
    bad.cf_a0 -= 1;
    CHECK_FALSE(verify_certificate(bad, full_cert().checked_to).ok);

    // Inflating the claimed range beyond the witness coverage is refused.
    NonFinitenessCertificate inflated = certificate_from_json(text);
    inflated.checked_to = 100000000;
    CHECK_FALSE(verify_certificate(inflated, 100000000).ok);

    // Shrinking the stored floor keeps it a valid lower bound; verification
    // still passes. Inflating it beyond the recomputed floor fails.
    NonFinitenessCertificate weaker = certificate_from_json(text);
    weaker.delta_lower /= 2;
    CHECK(verify_certificate(weaker, full_cert().checked_to).ok);
    NonFinitenessCertificate stronger = certificate_from_json(text);
    stronger.delta_lower *= 2;
    CHECK_FALSE(verify_certificate(stronger, full_cert().checked_to).ok);
}

TEST_CASE("forge handles a deep prefix by stopping at the threshold step") {
    // A deep-prefix target: alpha ~ -0.12 selects (a, b) = (6, 13); the
    // prefix tip is q_N = 259, so the first growth quotient would have ~1e783
    // digits and the extension stops after the threshold quotient. Coverage
    // is then capped at q_N - 1 = 258.
    const NonFinitenessCertificate cert =
        forge_pair(1, -0.12, 1.0, 2, mpq_class(1, 20), 3, {});
    CHECK(cert.b == 13);
    CHECK(cert.a == 6);
    CHECK(cert.steps_done == 1);
    CHECK(cert.budget_stopped);
    CHECK(cert.checked_to == 258);
    CHECK(cert.delta_lower > 0);
    CHECK(verify_certificate(cert, 258).ok);
    CHECK(verify_certificate(cert, 10).ok);

    // Scan floor: every value of the scanned pair stays above the certificate
    // floor on the certified range.
    const double alpha = cert.alpha_value();
    const double theta = (cert.theta.lo.get_d() + cert.theta.hi.get_d()) / 2;
    const LsrEstimate est = lsr_estimate(1, alpha, theta, 200);
    CHECK(est.value >= cert.lsr_floor * (1 - 1e-9));
    CHECK(est.status != LsrStatus::ZeroCertified);
}

TEST_CASE("forge with scaled lambda and with a negative angle target") {
    // lambda = 1/2 shifts alpha but not the congruence geometry.
    const NonFinitenessCertificate half =
        forge_pair(mpq_class(1, 2), 0.16, 1.0, 2, mpq_class(13, 10), 3, {});
    CHECK(half.b == 5);
    CHECK(half.lambda == mpq_class(1, 2));
    CHECK(half.checked_to == 1000);
    CHECK(half.lsr_floor > 0);
    CHECK(verify_certificate(half, 1000).ok);

    // Negative target: a0 < 0, steering lands on a larger prefix tip, so the
    // extension stops at the threshold quotient and coverage shrinks.
    const NonFinitenessCertificate neg =
        forge_pair(1, -0.3249, -1.0, 2, mpq_class(2, 5), 3, {});
    CHECK(neg.b == 5);
    CHECK(neg.a == 2);
    CHECK(neg.cf_a0 == -2);
    CHECK(neg.steps_done == 1);
    CHECK(neg.checked_to == 26);
    CHECK(neg.theta.hi.get_d() < 0);
    CHECK(verify_certificate(neg, 26).ok);
}

TEST_CASE("forge with a non-integer improvement ratio") {
    // K = 3/2 drives the exact checks through nontrivial denominator powers.
    const NonFinitenessCertificate cert =
        forge_pair(1, 0.32, 1.0, mpq_class(3, 2), mpq_class(13, 10), 3, {});
    CHECK(cert.K == mpq_class(3, 2));
    CHECK(cert.cf_quotients[3].coeff == 2278125);  // smallest multiple of 5 past (3*5)^6
    CHECK(cert.steps_done == 2);
    CHECK(cert.checked_to == 1000);
    CHECK(verify_certificate(cert, 1000).ok);
}

TEST_CASE("witness table carries the witness denominators") {
    const NonFinitenessCertificate& cert = full_cert();
    REQUIRE(cert.witness_table.size() == (size_t)cert.checked_to + 1);
    // n < q_N = 5 is served by q_N itself, everything after by q_{N+1}.
    CHECK(cert.witness_table[0].witness_q == "5");
    CHECK(cert.witness_table[4].witness_q == "5");
    CHECK(cert.witness_table[5].witness_q == "64000002");
    CHECK(cert.witness_table[1000].witness_q == "64000002");
    for (const auto& row : cert.witness_table) CHECK(row.margin_log10 > 0);
    // K = 2 does not dominate the ratio-chain constant; the certificate says so.
    CHECK(cert.ratio_chain_K > 2);
    CHECK_FALSE(cert.k_covers_ratio_chain);
}

TEST_CASE("scan of the forged pair: strictly decreasing witnesses, floored") {
    const NonFinitenessCertificate& cert = full_cert();
    const double alpha = cert.alpha_value();
    const double theta = (cert.theta.lo.get_d() + cert.theta.hi.get_d()) / 2;

    LsrOptions opt;
    opt.keep_per_n = true;
    const LsrEstimate est = lsr_estimate(1, alpha, theta, 200, opt);

    // Running-minimum improvements form the scan's witness subsequence.
    std::vector<std::pair<long, double>> improvements;
    double running = std::numeric_limits<double>::infinity();
    for (const auto& [n, v] : *est.per_n) {
        if (v < running) {
            improvements.emplace_back(n, v);
            running = v;
        }
    }
    REQUIRE(improvements.size() >= 2);
    for (size_t i = 1; i < improvements.size(); ++i)
        CHECK(improvements[i].second < improvements[i - 1].second);
    // The last improvement sits at the prefix-tip denominator q_N = 5.
    CHECK(improvements.back().first == 5);
    CHECK(est.argmin.value() == 5);
    // Everything stays above the certified floor.
    CHECK(est.value >= cert.lsr_floor * (1 - 1e-9));
    CHECK(est.value > 0);
    CHECK(est.status != LsrStatus::ZeroCertified);
    // No zero product exists up to the scan depth.
    CHECK_FALSE(find_zero_product(1, alpha, theta, 200).has_value());
}
