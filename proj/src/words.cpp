#include "lsr/words.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lsr {

long Word::total_length() const {
    long n = 0;
    for (const auto& b : blocks) n += b.h_exp + b.r_exp;
    return n;
}

Word Word::normalized() const {
    if (total_length() < 1) fail(errc::invalid_word, "empty product");
    Word out;
    for (const auto& b : blocks) {
        if (b.h_exp < 0 || b.r_exp < 0) fail(errc::invalid_word, "negative exponent");
        if (b.h_exp == 0 && b.r_exp == 0) continue;
        if (!out.blocks.empty()) {
            Block& last = out.blocks.back();
            if (last.h_exp == 0) {
                // Previous block ended in a bare R-run; b's R-run continues it.
                last.r_exp += b.r_exp;
                last.h_exp = b.h_exp;
                continue;
            }
            if (b.r_exp == 0) {
                // Bare H-run extends the previous block's H-run.
                last.h_exp += b.h_exp;
                continue;
            }
        }
        out.blocks.push_back(b);
    }
    return out;
}

Word Word::from_bits(std::uint64_t bits, int len) {
    Word w;
    // Scan from position 0 (rightmost factor); group maximal R-run then H-run.
    int i = 0;
    while (i < len) {
        Block b;
        while (i < len && ((bits >> i) & 1u) == 0) {
            ++b.r_exp;
            ++i;
        }
        while (i < len && ((bits >> i) & 1u) == 1) {
            ++b.h_exp;
            ++i;
        }
        w.blocks.push_back(b);
    }
    return w;
}

std::string Word::to_string() const {
    std::ostringstream os;
    bool first = true;
    // Print leftmost factor first: blocks in reverse order, H before R.
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        if (it->h_exp > 0) {
            if (!first) os << ' ';
            os << 'H';
            if (it->h_exp > 1) os << '^' << it->h_exp;
            first = false;
        }
        if (it->r_exp > 0) {
            if (!first) os << ' ';
            os << 'R';
            if (it->r_exp > 1) os << '^' << it->r_exp;
            first = false;
        }
    }
    return os.str();
}

Matrix2 word_matrix(const Matrix2& h, const Matrix2& r, const Word& w) {
    if (w.total_length() < 1) fail(errc::invalid_word, "empty product");
    Matrix2 acc = Matrix2::identity();
    for (const auto& b : w.blocks) {
        if (b.h_exp < 0 || b.r_exp < 0) fail(errc::invalid_word, "negative exponent");
        acc = matrix_power(r, b.r_exp) * acc;
        acc = matrix_power(h, b.h_exp) * acc;
    }
    return acc;
}

namespace {

// Product of the sign sequence `bits` of length `len`; bit 0 applied first.
inline Matrix2 bits_product(const Matrix2& h, const Matrix2& r, std::uint64_t bits, int len) {
    Matrix2 acc = ((bits & 1u) ? h : r);
    for (int i = 1; i < len; ++i) acc = (((bits >> i) & 1u) ? h : r) * acc;
    return acc;
}

struct MinTrack {
    double value = std::numeric_limits<double>::infinity();
    std::uint64_t arg = 0;
    void update(double v, std::uint64_t s) {
        if (v < value || (v == value && s < arg)) {
            value = v;
            arg = s;
        }
    }
    void merge(const MinTrack& o) { update(o.value, o.arg); }
};

}  // namespace

GrowthTable enumerate_min_growth(const Matrix2& h, const Matrix2& r, int L_max,
                                 const EnumerateOptions& opts) {
    if (L_max < 1) fail(errc::not_in_domain, "L_max must be >= 1");
    if (L_max > enumeration_guard) fail(errc::budget_exceeded, "enumeration guard is L_max <= 22");

    GrowthTable table;
    for (int L = 1; L <= L_max; ++L) {
        const std::uint64_t total = 1ull << L;
        MinTrack rho_min, norm_min;
        if (opts.parallel) {
#pragma omp parallel
            {
                MinTrack rho_loc, norm_loc;
#pragma omp for schedule(static) nowait
                for (long long s = 0; s < (long long)total; ++s) {
                    const Matrix2 m = bits_product(h, r, (std::uint64_t)s, L);
                    rho_loc.update(std::pow(spectral_radius(m), 1.0 / L), (std::uint64_t)s);
                    norm_loc.update(std::pow(op_norm(m), 1.0 / L), (std::uint64_t)s);
                }
#pragma omp critical
                {
                    rho_min.merge(rho_loc);
                    norm_min.merge(norm_loc);
                }
            }
        } else {
            for (std::uint64_t s = 0; s < total; ++s) {
                const Matrix2 m = bits_product(h, r, s, L);
                rho_min.update(std::pow(spectral_radius(m), 1.0 / L), s);
                norm_min.update(std::pow(op_norm(m), 1.0 / L), s);
            }
        }
        GrowthRow row;
        row.length = L;
        row.min_rho = rho_min.value;
        row.min_norm = norm_min.value;
        row.argmin_rho = Word::from_bits(rho_min.arg, L);
        row.argmin_norm = Word::from_bits(norm_min.arg, L);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string GrowthTable::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "length,min_rho,min_norm,argmin_word\n";
    for (const auto& row : rows)
        os << row.length << ',' << row.min_rho << ',' << row.min_norm << ','
           << row.argmin_rho.to_string() << '\n';
    return os.str();
}

NewFormulaReport verify_newformula(const Matrix2& h, const Matrix2& r, int L_max,
                                   const EnumerateOptions& opts) {
    if (classify_membership(h).cls != MatrixClass::InP ||
        classify_membership(r).cls != MatrixClass::InE)
        fail(errc::not_in_domain, "pair must be InP x InE");
    if (L_max < 1) fail(errc::not_in_domain, "L_max must be >= 1");
    if (L_max > enumeration_guard) fail(errc::budget_exceeded, "enumeration guard is L_max <= 22");

    constexpr double slack = 1e-12;
    const double rho_r = spectral_radius(r);

    // bound_L = min( rho(R), min_{0 <= n < L} rho(H R^n)^{1/(n+1)} ), n = 0 term is rho(H).
    std::vector<double> bound(L_max + 1, rho_r);
    {
        double best = std::numeric_limits<double>::infinity();
        Matrix2 hrn = h;  // H R^n
        for (int n = 0; n < L_max; ++n) {
            best = std::min(best, std::pow(spectral_radius(hrn), 1.0 / (n + 1)));
            bound[n + 1] = std::min(rho_r, best);
            hrn = hrn * r;
        }
    }

    NewFormulaReport rep;
    rep.L_max = L_max;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    for (int L = 1; L <= L_max; ++L) {
        const std::uint64_t total = 1ull << L;
        long long viol = 0;
        double worst = std::numeric_limits<double>::infinity();
        std::uint64_t worst_arg = 0;
        if (opts.parallel) {
#pragma omp parallel
            {
                long long viol_loc = 0;
                double worst_loc = std::numeric_limits<double>::infinity();
                std::uint64_t arg_loc = 0;
#pragma omp for schedule(static) nowait
                for (long long s = 0; s < (long long)total; ++s) {
                    const Matrix2 m = bits_product(h, r, (std::uint64_t)s, L);
                    const double lhs = std::pow(spectral_radius(m), 1.0 / L);
                    const double gap = lhs - bound[L];
                    if (gap < -slack) ++viol_loc;
                    if (gap < worst_loc || (gap == worst_loc && (std::uint64_t)s < arg_loc)) {
                        worst_loc = gap;
                        arg_loc = (std::uint64_t)s;
                    }
                }
#pragma omp critical
                {
                    viol += viol_loc;
                    if (worst_loc < worst || (worst_loc == worst && arg_loc < worst_arg)) {
                        worst = worst_loc;
                        worst_arg = arg_loc;
                    }
                }
            }
        } else {
            for (std::uint64_t s = 0; s < total; ++s) {
                const Matrix2 m = bits_product(h, r, s, L);
                const double lhs = std::pow(spectral_radius(m), 1.0 / L);
                const double gap = lhs - bound[L];
                if (gap < -slack) ++viol;
                if (gap < worst || (gap == worst && s < worst_arg)) {
                    worst = gap;
                    worst_arg = s;
                }
            }
        }
        rep.words_checked += (long long)total;
        rep.violations += viol;
        if (worst < rep.worst_slack) {
            rep.worst_slack = worst;
            rep.worst_word = Word::from_bits(worst_arg, L);
        }
    }
    return rep;
}

}  // namespace lsr
