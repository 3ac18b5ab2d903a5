#include "lsr/certificate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "lsr/spectrum.hpp"
#include "lsr/version.hpp"

#include <json.hpp>

namespace lsr {

namespace {

mpz_class mod_norm(const mpz_class& v, const mpz_class& b) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), b.get_mpz_t());
    return r;
}

double mpq_log10(const mpq_class& v) {
    // log10 via mantissa/exponent split; fine for reporting margins.
    signed long int en, ed;
    const double mn = mpz_get_d_2exp(&en, v.get_num().get_mpz_t());
    const double md = mpz_get_d_2exp(&ed, v.get_den().get_mpz_t());
    return (std::log2(std::abs(mn)) - std::log2(std::abs(md)) + (double)(en - ed)) *
           0.30102999566398119521;
}

// Interval product for theta = pi * vartheta / b (vartheta may be negative).
RationalInterval interval_scale(const RationalInterval& x, const RationalInterval& pos,
                                const mpq_class& div) {
    const mpq_class c1 = x.lo * pos.lo / div, c2 = x.lo * pos.hi / div;
    const mpq_class c3 = x.hi * pos.lo / div, c4 = x.hi * pos.hi / div;
    return {std::min(std::min(c1, c2), std::min(c3, c4)),
            std::max(std::max(c1, c2), std::max(c3, c4))};
}

struct Ledger {
    std::vector<NonFinitenessCertificate::WitnessRow> rows;
    mpq_class delta_lower;
    bool ok = false;
    long offending_n = -1;
    std::string failure;
};

// The exact per-n verification shared by forge and verify: the coset-distance
// claim dist(n vt) > 1/(2 q_{j+1}) on each convergent bracket, the strict
// improvement inequality with the branch-dependent witness levels, and the
// delta floor.
Ledger run_ledger(const ContinuedFraction& cf, const mpz_class& a, const mpz_class& b,
                  const mpq_class& K, long N, long n_max) {
    Ledger led;
    const long d = cf.size();
    if (d < N + 1) {
        led.failure = "certificate has no extension quotient";
        return led;
    }
    if (!(mpq_class(cf.q(d - 1)) > mpq_class(n_max))) {
        led.failure = "n_max exceeds the certificate's witness coverage";
        return led;
    }
    const mpz_class a_res = mod_norm(a, b);

    // Outward-rounded enclosure of vartheta: compact endpoints, still exact.
    const RationalInterval vt = outward_round(eval_enclosure(cf, d), 480);

    // Witness upper bounds dist(q_k vt) <= 1/q_{k+1}: the numerator of
    // q_k vt - p_k over the enclosure is bounded by the convergent identity
    // |p_{k+1} q_k - p_k q_{k+1}| = 1, and p_k == a (mod b) places it in the
    // right coset.
    auto witness_residue_ok = [&](long k) { return mod_norm(cf.p(k), b) == a_res; };

    // Witness level for n < q_N is N; for q_N <= n < q_{d-1} it is d - 1.
    if (!witness_residue_ok(N)) {
        led.failure = "witness convergent at the prefix tip is off-coset";
        return led;
    }
    const bool have_far = d - 1 > N;
    if (have_far && !witness_residue_ok(d - 1)) {
        led.failure = "witness convergent at the extension tip is off-coset";
        return led;
    }

    // Far witness bound, proved once:
    //   dist(q_{d-1} vt)^{1/(1+q_{d-1})} <= (1/q_d)^{1/(1+q_{d-1})}
    //                                     < (1/(2 K q_{d-1}))^{1/(1+q_{d-2})}.
    if (have_far) {
        const mpq_class x(mpz_class(1), cf.q(d));
        const mpq_class y = mpq_class(1) / (2 * K * mpq_class(cf.q(d - 1)));
        if (!prove_root_less(x, mpz_class(1 + cf.q(d - 1)), y, mpz_class(1 + cf.q(d - 2)))) {
            led.failure = "far witness bound failed";
            return led;
        }
    }

    // Incremental powers for the cleared comparisons.
    const mpz_class near_qn = cf.q(N);
    mpz_class near_e = 1 + near_qn;  // exponent 1+q_N on the near branch
    if (!near_e.fits_ulong_p()) {
        led.failure = "prefix tip too large";
        return led;
    }
    // Near branch: X^{1+q_N} > K^{1+q_N} * (1/q_{N+1})^{1+n}.
    // Far branch:  X^{1+q_{d-2}} * (2 K q_{d-1})^{1+n} > K^{1+q_{d-2}}.
    const unsigned long near_eu = near_e.get_ui();
    mpz_class k_num_near, k_den_near;
    mpz_pow_ui(k_num_near.get_mpz_t(), K.get_num().get_mpz_t(), near_eu);
    mpz_pow_ui(k_den_near.get_mpz_t(), K.get_den().get_mpz_t(), near_eu);

    unsigned long far_eu = 0;
    mpz_class k_num_far, k_den_far, far_base_num, far_base_den;
    if (have_far) {
        mpz_class far_e = 1 + cf.q(d - 2);
        if (!far_e.fits_ulong_p()) {
            led.failure = "witness exponent too large";
            return led;
        }
        far_eu = far_e.get_ui();
        mpz_pow_ui(k_num_far.get_mpz_t(), K.get_num().get_mpz_t(), far_eu);
        mpz_pow_ui(k_den_far.get_mpz_t(), K.get_den().get_mpz_t(), far_eu);
        const mpq_class fb = 2 * K * mpq_class(cf.q(d - 1));
        far_base_num = fb.get_num();
        far_base_den = fb.get_den();
    }

    // Convergent denominators <= n_max delimit the claim brackets.
    std::vector<long> qsmall;  // indices k with q_k <= n_max
    for (long k = 0; k <= d - 1; ++k) {
        if (mpq_class(cf.q(k)) <= mpq_class(n_max))
            qsmall.push_back(k);
        else
            break;
    }

    led.rows.resize((size_t)n_max + 1);

    // Power tables, filled serially so the n-loop can run in parallel with
    // deterministic, order-independent aggregation.
    const mpz_class& qN1 = cf.q(N + 1);
    // Largest index served by the near witness: n < q_N (and n <= n_max).
    long near_hi = n_max;
    if (mpq_class(near_qn) <= mpq_class(n_max)) near_hi = (long)near_qn.get_d() - 1;
    std::vector<mpz_class> y_pows;  // q_{N+1}^{1+n}, n = 0..near_hi
    {
        mpz_class acc = 1;
        for (long n = 0; n <= near_hi; ++n) {
            acc *= qN1;
            y_pows.push_back(acc);
        }
    }
    std::vector<mpz_class> far_num_pows, far_den_pows;  // (2 K q_{d-1})^{1+n}
    if (have_far) {
        mpz_class an = 1, ad = 1;
        for (long n = 0; n <= n_max; ++n) {
            an *= far_base_num;
            ad *= far_base_den;
            if (n >= near_hi + 1) {
                far_num_pows.push_back(an);
                far_den_pows.push_back(ad);
            } else {
                far_num_pows.emplace_back();
                far_den_pows.emplace_back();
            }
        }
    }

    long bad_n = n_max + 1;
    std::string bad_what;
    Dyadic delta_min{0, 0};
    bool delta_set = false;

#pragma omp parallel
    {
        long loc_bad = n_max + 1;
        std::string loc_what;
        Dyadic loc_delta{0, 0};
        bool loc_set = false;

#pragma omp for schedule(static) nowait
        for (long n = 0; n <= n_max; ++n) {
            if (loc_bad <= n_max) continue;
            RationalInterval dist;
            try {
                dist = dist_to_coset({vt.lo * n, vt.hi * n}, a, b);
            } catch (const error& e) {
                loc_bad = n;
                loc_what = e.what();
                continue;
            }
            if (dist.lo <= 0) {
                loc_bad = n;
                loc_what = "distance interval touches zero";
                continue;
            }

            // Claim: dist > 1/(2 q_{j+1}) where q_j <= n < q_{j+1}.
            long j = -1;
            for (long k : qsmall)
                if (mpq_class(cf.q(k)) <= mpq_class(n)) j = k;
            const mpz_class& q_next = cf.q(j + 1);
            if (!(dist.lo * 2 * q_next > 1)) {
                loc_bad = n;
                loc_what = "coset distance claim failed";
                continue;
            }

            // Strict improvement with the branch witness.
            bool improved = false;
            long wlevel = -1;
            double margin = 0;
            if (n <= near_hi) {
                // X^{1+q_N} * q_{N+1}^{1+n} > K^{1+q_N}, X = dist lower bound.
                mpz_class xn, xd;
                mpz_pow_ui(xn.get_mpz_t(), dist.lo.get_num().get_mpz_t(), near_eu);
                mpz_pow_ui(xd.get_mpz_t(), dist.lo.get_den().get_mpz_t(), near_eu);
                improved = xn * y_pows[(size_t)n] * k_den_near > k_num_near * xd;
                wlevel = N;
                margin = mpq_log10(dist.lo) / (n + 1) - mpq_log10(K) / (n + 1) +
                         mpq_log10(mpq_class(qN1)) / (near_qn.get_d() + 1);
            } else if (have_far) {
                mpz_class xn, xd;
                mpz_pow_ui(xn.get_mpz_t(), dist.lo.get_num().get_mpz_t(), far_eu);
                mpz_pow_ui(xd.get_mpz_t(), dist.lo.get_den().get_mpz_t(), far_eu);
                improved = xn * far_num_pows[(size_t)n] * k_den_far >
                           k_num_far * xd * far_den_pows[(size_t)n];
                wlevel = d - 1;
                const mpq_class fb = mpq_class(far_base_num) / mpq_class(far_base_den);
                margin = mpq_log10(dist.lo) / (n + 1) - mpq_log10(K) / (n + 1) +
                         mpq_log10(fb) / (double)far_eu;
            } else {
                loc_bad = n;
                loc_what = "no witness available at this index";
                continue;
            }
            if (!improved) {
                loc_bad = n;
                loc_what = "strict improvement inequality failed";
                continue;
            }
            led.rows[(size_t)n].n = n;
            led.rows[(size_t)n].witness_level = wlevel;
            led.rows[(size_t)n].margin_log10 = margin;

            // delta floor: lower bound of dist^{1/(n+1)}.
            const Dyadic root = dy_root(dy_from_mpq(dist.lo, 160, Round::Down),
                                        (unsigned long)(n + 1), 96, Round::Down);
            if (!loc_set || dy_cmp(root, loc_delta) < 0) {
                loc_delta = root;
                loc_set = true;
            }
        }

#pragma omp critical
        {
            if (loc_bad < bad_n) {
                bad_n = loc_bad;
                bad_what = loc_what;
            }
            if (loc_set && (!delta_set || dy_cmp(loc_delta, delta_min) < 0)) {
                delta_min = loc_delta;
                delta_set = true;
            }
        }
    }

    if (bad_n <= n_max) {
        led.offending_n = bad_n;
        led.failure = bad_what;
        return led;
    }
    led.delta_lower = dy_to_mpq(delta_min);
    led.ok = true;
    return led;
}

bool is_prime(const mpz_class& b) { return mpz_probab_prime_p(b.get_mpz_t(), 40) > 0; }

}  // namespace

ContinuedFraction NonFinitenessCertificate::rebuild_cf() const {
    ContinuedFraction cf = ContinuedFraction::from_a0(cf_a0);
    for (size_t i = 0; i < cf_quotients.size(); ++i) cf.append(quotient_value(i));
    return cf;
}

mpz_class NonFinitenessCertificate::quotient_value(size_t i) const {
    const Quotient& qu = cf_quotients.at(i);
    if (qu.pow10 == 0) return qu.coeff;
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, qu.pow10);
    return qu.coeff * p10;
}

double NonFinitenessCertificate::alpha_value() const {
    const double ratio = mpq_class(mpq_class(a) / mpq_class(b)).get_d();
    return -mpq_class(lambda).get_d() / std::tan(std::numbers::pi * ratio);
}

std::tuple<mpz_class, mpz_class, double> select_rational_angle(double lambda,
                                                               double alpha_target, double eps,
                                                               long b_max) {
    if (lambda == 0) fail(errc::not_in_domain, "lambda must be nonzero");
    if (!(eps > 0)) fail(errc::not_in_domain, "eps must be positive");
    double best_diff = std::numeric_limits<double>::infinity();
    long best_a = 0, best_b = 0;
    double best_alpha = 0;
    for (long b = 5; b <= b_max; ++b) {
        if (!is_prime(mpz_class(b))) continue;
        for (long aa = 1; 2 * aa < b; ++aa) {
            for (int sgn = 1; sgn >= -1; sgn -= 2) {
                const long av = sgn * aa;
                const double alpha = -lambda / std::tan(std::numbers::pi * (double)av / (double)b);
                const double diff = std::abs(alpha - alpha_target);
                const bool better =
                    diff < best_diff ||
                    (diff == best_diff && (b < best_b || (b == best_b && aa < std::abs(best_a))));
                if (better) {
                    best_diff = diff;
                    best_a = av;
                    best_b = b;
                    best_alpha = alpha;
                }
            }
        }
    }
    if (!(best_diff < eps))
        fail(errc::no_rational_angle, "no prime-denominator angle within eps of alpha target");
    return {mpz_class(best_a), mpz_class(best_b), best_alpha};
}

NonFinitenessCertificate forge_pair(const mpq_class& lambda, double alpha_target,
                                    double theta_target, const mpq_class& K, const mpq_class& eps,
                                    int steps, const ForgeOptions& opts) {
    if (lambda == 0) fail(errc::not_in_domain, "lambda must be nonzero");
    if (K <= 1) fail(errc::not_in_domain, "K must be > 1");
    if (eps <= 0) fail(errc::not_in_domain, "eps must be positive");

    // Angles live mod pi; fold the target into (-pi/2, pi/2].
    const double theta_folded =
        theta_target - std::numbers::pi * std::round(theta_target / std::numbers::pi);

    auto [a, b, alpha] = select_rational_angle(lambda.get_d(), alpha_target, eps.get_d(),
                                               opts.b_max);
    (void)alpha;

    // vartheta target b*theta/pi as an exact interval; eps mapped the same way
    // (conservatively with the upper pi bound).
    const RationalInterval pi_iv = pi_interval();
    const mpq_class tgt(theta_folded);
    const mpq_class scaled = tgt * mpq_class(b);
    RationalInterval vt_target{scaled / pi_iv.hi, scaled / pi_iv.lo};
    const mpq_class eps_vt = eps * mpq_class(b) / pi_iv.hi;

    SeedResult seed = seed_congruent_prefix(vt_target, a, b, eps_vt);
    const long N = seed.cf.size();

    ExtendInfo info;
    ExtendOptions ext = opts.extend;
    ext.on_budget = BudgetPolicy::StopEarly;
    ContinuedFraction cf = extend_nonfinite(seed.cf, a, b, K, steps, ext, &info);
    if (info.steps_done < 1)
        fail(errc::budget_exceeded, "no extension step fits in the digit budget");

    NonFinitenessCertificate cert;
    cert.lambda = lambda;
    cert.a = a;
    cert.b = b;
    cert.K = K;
    cert.cf_a0 = cf.a0;
    for (long i = 0; i < N; ++i) cert.cf_quotients.push_back({cf.quotients[(size_t)i], 0});
    for (const auto& st : info.steps) cert.cf_quotients.push_back({st.coeff, st.pow10});
    cert.seed_len = N;
    cert.copied_depth = seed.copied_depth;
    cert.fallback_used = seed.fallback_used;
    cert.steps_requested = steps;
    cert.steps_done = info.steps_done;
    cert.budget_stopped = info.budget_stopped;
    cert.growth_floor_C = info.growth_floor_C;
    cert.tool_version = version_string;

    // Checked range capped by witness coverage q_{d-1} - 1.
    const long d = cf.size();
    long want = opts.checked_to;
    if (mpq_class(cf.q(d - 1)) <= mpq_class(want)) {
        mpq_class cap = mpq_class(cf.q(d - 1)) - 1;
        want = (long)cap.get_d();
    }
    Ledger led = run_ledger(cf, a, b, K, N, want);
    if (!led.ok)
        fail(errc::verification_failed,
             "forged certificate failed its own ledger: " + led.failure +
                 (led.offending_n >= 0 ? " at n=" + std::to_string(led.offending_n) : ""));
    cert.checked_to = want;
    cert.delta_lower = led.delta_lower;
    cert.witness_table = std::move(led.rows);
    for (auto& row : cert.witness_table) {
        const mpz_class& q = cf.q(row.witness_level);
        if (mpz_sizeinbase(q.get_mpz_t(), 10) <= 64) row.witness_q = q.get_str();
    }

    cert.vartheta = outward_round(eval_enclosure(cf, d), 480);
    if (!(cert.vartheta.lo > mpq_class(-b) / 2 && cert.vartheta.hi < mpq_class(b) / 2))
        fail(errc::verification_failed, "constructed angle left (-b/2, b/2)");
    cert.theta = interval_scale(cert.vartheta, pi_iv, mpq_class(b));

    const RatioBound rb = ratio_bound(lambda.get_d(), cert.alpha_value(), opts.grid);
    cert.c0 = rb.c0;
    const mpq_class floor_q = pi_iv.lo * cert.delta_lower / (mpq_class(rb.c0) * mpq_class(b));
    cert.lsr_floor = floor_q.get_d();
    const double need = std::pow(rb.c0 * mpq_class(b).get_d() / std::numbers::pi, 2.0);
    cert.ratio_chain_K = need;
    cert.k_covers_ratio_chain = K.get_d() >= need;
    return cert;
}

VerifyReport verify_certificate(const NonFinitenessCertificate& cert, long n_max) {
    const auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep;
    rep.checked_to = n_max;
    auto finish = [&](bool ok, const std::string& why, long off = -1) {
        rep.ok = ok;
        rep.failure = why;
        rep.offending_n = off;
        rep.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    };

    // Structural checks.
    if (cert.b < 5 || !is_prime(cert.b)) return finish(false, "b is not a prime >= 5");
    const mpz_class a_res = mod_norm(cert.a, cert.b);
    if (a_res == 0 || cert.a == 0) return finish(false, "a vanishes mod b");
    if (2 * abs(cert.a) >= cert.b) return finish(false, "a/b outside (-1/2, 1/2)");
    if (cert.K <= 1) return finish(false, "K must exceed 1");
    if (cert.lambda == 0) return finish(false, "lambda must be nonzero");
    if (cert.seed_len < 1 || cert.seed_len + cert.steps_done != (long)cert.cf_quotients.size())
        return finish(false, "quotient bookkeeping is inconsistent");
    if (n_max > cert.checked_to) return finish(false, "n_max exceeds the certified range");

    ContinuedFraction cf;
    try {
        cf = cert.rebuild_cf();
    } catch (const error& e) {
        return finish(false, std::string("invalid quotients: ") + e.what());
    }
    const long N = cert.seed_len;
    const long d = cf.size();

    // Tip congruences of the steered prefix.
    if (mod_norm(cf.p(N), cert.b) != a_res || mod_norm(cf.p(N - 1), cert.b) != a_res)
        return finish(false, "prefix tip congruences failed");

    // Threshold quotient: exact inequality, minimality, divisibility.
    {
        const mpz_class aN1 = cert.quotient_value((size_t)N);
        if (mod_norm(aN1, cert.b) != 0) return finish(false, "threshold quotient not divisible by b");
        const mpz_class& qN = cf.q(N);
        const mpz_class& qN1 = cf.q(N - 1);
        const mpz_class E = 1 + qN;
        if (!E.fits_ulong_p()) return finish(false, "threshold exponent out of range");
        const mpz_class base = 2 * cert.K.get_num() * qN;
        if ((double)E.get_ui() * mpz_sizeinbase(base.get_mpz_t(), 2) > 4.0e9)
            return finish(false, "threshold check exceeds size limits");
        mpz_class num, kde;
        mpz_pow_ui(num.get_mpz_t(), base.get_mpz_t(), E.get_ui());
        mpz_pow_ui(kde.get_mpz_t(), mpz_class(cert.K.get_den()).get_mpz_t(), E.get_ui());
        if (!(cf.q(N + 1) * kde > num)) return finish(false, "threshold growth inequality failed");
        if (aN1 - cert.b >= 1 && ((aN1 - cert.b) * qN + qN1) * kde > num)
            return finish(false, "threshold quotient is not minimal");
        // C is a power of two with q_{N+1} <= C^{1+q_N}.
        if (cert.growth_floor_C < 2 ||
            mpz_scan1(cert.growth_floor_C.get_mpz_t(), 0) !=
                mpz_sizeinbase(cert.growth_floor_C.get_mpz_t(), 2) - 1)
            return finish(false, "growth floor C is not a power of two");
        const unsigned long t = mpz_sizeinbase(cert.growth_floor_C.get_mpz_t(), 2) - 1;
        if ((double)t * E.get_d() > 4.0e9) return finish(false, "C check exceeds size limits");
        mpz_class pw = 1;
        mpz_mul_2exp(pw.get_mpz_t(), pw.get_mpz_t(), (mp_bitcnt_t)(t * E.get_ui()));
        if (!(cf.q(N + 1) <= pw)) return finish(false, "C bound on q_{N+1} failed");
    }

    // Growth quotients: canonical-form conformance plus both inequalities.
    for (long m = N + 1; m < d; ++m) {
        const mpz_class aq = cert.quotient_value((size_t)m);
        if (mod_norm(aq, cert.b) != 0) return finish(false, "growth quotient not divisible by b");
        if (mod_norm(cf.p(m + 1), cert.b) != a_res || mod_norm(cf.p(m), cert.b) != a_res)
            return finish(false, "congruence persistence failed");

        const mpz_class& q_cur = cf.q(m);
        const mpz_class& q_prev = cf.q(m - 1);
        const mpq_class base = 2 * cert.K * mpq_class(q_cur);
        const NonFinitenessCertificate::Quotient& qu = cert.cf_quotients[(size_t)m];
        if (qu.pow10 == 0) {
            mpz_class expect;
            try {
                expect = growth_quotient(q_prev, q_cur, cert.K, cert.b);
            } catch (const error& e) {
                return finish(false, std::string("growth recomputation failed: ") + e.what());
            }
            if (expect != aq) return finish(false, "growth quotient does not match its formula");
        } else {
            // Decimal-upper form: recompute the canonical (coeff, pow10).
            const mpz_class e_cur = 1 + q_cur, e_prev = 1 + q_prev;
            if (!e_cur.fits_ulong_p() || !e_prev.fits_ulong_p())
                return finish(false, "growth exponents out of range");
            const Dyadic pow_up =
                dy_pow(dy_from_mpq(base, 224, Round::Up), e_cur, 224, Round::Up);
            const Dyadic root_up = dy_root(pow_up, e_prev.get_ui(), 224, Round::Up);
            const Dyadic val_up =
                dy_div(root_up, dy_from_mpz(q_cur, 224, Round::Down), 224, Round::Up);
            const DecimalUpper dec = dy_decimal_upper(val_up, 24);
            if (dec.pow10 != qu.pow10 || cert.b * dec.coeff != qu.coeff)
                return finish(false, "growth quotient does not match its canonical form");
        }

        bool conclusive = true;
        if (!prove_root_less(base, 1 + q_prev, mpq_class(cf.q(m + 1)), 1 + q_cur, &conclusive) ||
            !conclusive)
            return finish(false, "left growth inequality failed");
        // Right chain against C (4Kb)^{sum 1/(1+q_k)}.
        mpq_class S = 0;
        for (long k = N; k <= m - 1; ++k) S += mpq_class(1) / mpq_class(1 + cf.q(k));
        const mpq_class fourKb = 4 * cert.K * mpq_class(cert.b);
        const Dyadic qd = dy_from_mpz(cf.q(m + 1), 256, Round::Up);
        const auto lq = dy_log2_bounds(qd, 48, 256);
        const Dyadic fn = dy_from_mpz(fourKb.get_num(), 256, Round::Down);
        const Dyadic fd = dy_from_mpz(fourKb.get_den(), 256, Round::Up);
        const mpq_class lf_lo = dy_log2_bounds(fn, 48, 256).first - dy_log2_bounds(fd, 48, 256).second;
        const mpq_class lhs_hi = lq.second / mpq_class(1 + q_cur);
        const mpq_class rhs_lo =
            mpq_class((long)(mpz_sizeinbase(cert.growth_floor_C.get_mpz_t(), 2) - 1)) +
            S * lf_lo;
        if (!(lhs_hi <= rhs_lo)) return finish(false, "right growth chain failed");
    }

    // Stored enclosure must contain the recomputed one and stay in range.
    const RationalInterval vt = outward_round(eval_enclosure(cf, d), 480);
    if (!(cert.vartheta.lo <= vt.lo && vt.hi <= cert.vartheta.hi))
        return finish(false, "stored vartheta enclosure does not contain the rebuilt one");
    if (!(vt.lo > mpq_class(-cert.b) / 2 && vt.hi < mpq_class(cert.b) / 2))
        return finish(false, "vartheta leaves (-b/2, b/2)");

    Ledger led = run_ledger(cf, cert.a, cert.b, cert.K, N, n_max);
    if (!led.ok) return finish(false, led.failure, led.offending_n);

    // The stored floor is over the full checked range, so it must also bound
    // the floor recomputed over any sub-range.
    if (!(cert.delta_lower <= led.delta_lower))
        return finish(false, "stored delta floor exceeds the recomputed floor");
    if (!(cert.delta_lower > 0)) return finish(false, "delta floor not positive");

    rep.delta_lower = led.delta_lower;
    return finish(true, "");
}

// ---------------------------------------------------------------------------
// JSON serialization. Big integers are decimal strings; huge quotients use
// the factored form {"coeff": "...", "pow10": n} with value coeff * 10^pow10.

namespace {

nlohmann::json mpq_json(const mpq_class& v) {
    return {{"num", v.get_num().get_str()}, {"den", v.get_den().get_str()}};
}

mpq_class mpq_from_json(const nlohmann::json& j) {
    mpq_class v(mpz_class(j.at("num").get<std::string>()),
                mpz_class(j.at("den").get<std::string>()));
    v.canonicalize();
    return v;
}

nlohmann::json interval_json(const RationalInterval& iv) {
    return {{"lo", mpq_json(iv.lo)}, {"hi", mpq_json(iv.hi)},
            {"lo_fp", iv.lo.get_d()}, {"hi_fp", iv.hi.get_d()}};
}

RationalInterval interval_from_json(const nlohmann::json& j) {
    return {mpq_from_json(j.at("lo")), mpq_from_json(j.at("hi"))};
}

}  // namespace

std::string certificate_to_json(const NonFinitenessCertificate& cert, int indent) {
    nlohmann::json j;
    j["schema"] = "lsr.certificate/1";
    j["tool_version"] = cert.tool_version;
    j["lambda"] = mpq_json(cert.lambda);
    j["a"] = cert.a.get_str();
    j["b"] = cert.b.get_str();
    j["K"] = mpq_json(cert.K);
    j["alpha_fp"] = cert.alpha_value();
    nlohmann::json cfj;
    cfj["a0"] = cert.cf_a0.get_str();
    nlohmann::json quots = nlohmann::json::array();
    for (const auto& qu : cert.cf_quotients) {
        if (qu.pow10 == 0)
            quots.push_back(qu.coeff.get_str());
        else
            quots.push_back({{"coeff", qu.coeff.get_str()}, {"pow10", qu.pow10}});
    }
    cfj["quotients"] = std::move(quots);
    j["cf"] = std::move(cfj);
    j["seed_len"] = cert.seed_len;
    j["copied_depth"] = cert.copied_depth;
    j["fallback_used"] = cert.fallback_used;
    j["steps_requested"] = cert.steps_requested;
    j["steps_done"] = cert.steps_done;
    j["budget_stopped"] = cert.budget_stopped;
    j["growth_floor_C"] = cert.growth_floor_C.get_str();
    j["checked_to"] = cert.checked_to;
    j["delta_lower"] = mpq_json(cert.delta_lower);
    j["delta_lower_fp"] = cert.delta_lower.get_d();
    j["c0"] = cert.c0;
    j["lsr_floor"] = cert.lsr_floor;
    j["ratio_chain_K"] = cert.ratio_chain_K;
    j["k_covers_ratio_chain"] = cert.k_covers_ratio_chain;
    j["vartheta"] = interval_json(cert.vartheta);
    j["theta"] = interval_json(cert.theta);
    nlohmann::json wt = nlohmann::json::array();
    for (const auto& row : cert.witness_table) {
        nlohmann::json rj{{"n", row.n},
                          {"q_level", row.witness_level},
                          {"margin_log10", row.margin_log10}};
        if (!row.witness_q.empty()) rj["q"] = row.witness_q;
        wt.push_back(std::move(rj));
    }
    j["witness_table"] = std::move(wt);
    return j.dump(indent);
}

NonFinitenessCertificate certificate_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("schema").get<std::string>() != "lsr.certificate/1")
        fail(errc::not_in_domain, "unknown certificate schema");
    NonFinitenessCertificate cert;
    cert.tool_version = j.value("tool_version", "");
    cert.lambda = mpq_from_json(j.at("lambda"));
    cert.a = mpz_class(j.at("a").get<std::string>());
    cert.b = mpz_class(j.at("b").get<std::string>());
    cert.K = mpq_from_json(j.at("K"));
    cert.cf_a0 = mpz_class(j.at("cf").at("a0").get<std::string>());
    for (const auto& qj : j.at("cf").at("quotients")) {
        NonFinitenessCertificate::Quotient qu;
        if (qj.is_string()) {
            qu.coeff = mpz_class(qj.get<std::string>());
        } else {
            qu.coeff = mpz_class(qj.at("coeff").get<std::string>());
            qu.pow10 = qj.at("pow10").get<unsigned long>();
        }
        cert.cf_quotients.push_back(std::move(qu));
    }
    cert.seed_len = j.at("seed_len").get<long>();
    cert.copied_depth = j.at("copied_depth").get<long>();
    cert.fallback_used = j.at("fallback_used").get<bool>();
    cert.steps_requested = j.at("steps_requested").get<int>();
    cert.steps_done = j.at("steps_done").get<int>();
    cert.budget_stopped = j.at("budget_stopped").get<bool>();
    cert.growth_floor_C = mpz_class(j.at("growth_floor_C").get<std::string>());
    cert.checked_to = j.at("checked_to").get<long>();
    cert.delta_lower = mpq_from_json(j.at("delta_lower"));
    cert.c0 = j.at("c0").get<double>();
    cert.lsr_floor = j.at("lsr_floor").get<double>();
    cert.ratio_chain_K = j.value("ratio_chain_K", 0.0);
    cert.k_covers_ratio_chain = j.value("k_covers_ratio_chain", false);
    cert.vartheta = interval_from_json(j.at("vartheta"));
    cert.theta = interval_from_json(j.at("theta"));
    for (const auto& wj : j.at("witness_table")) {
        NonFinitenessCertificate::WitnessRow row;
        row.n = wj.at("n").get<long>();
        row.witness_level = wj.at("q_level").get<long>();
        row.witness_q = wj.value("q", "");
        row.margin_log10 = wj.at("margin_log10").get<double>();
        cert.witness_table.push_back(row);
    }
    return cert;
}

}  // namespace lsr
