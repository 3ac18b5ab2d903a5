#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lsr/mat2.hpp"

namespace lsr {

// A product pattern H^{n_k} R^{m_k} ... H^{n_1} R^{m_1} stored as exponent
// blocks. blocks[0] = (n_1, m_1) is applied first (rightmost factor).
struct Word {
    struct Block {
        long h_exp = 0;
        long r_exp = 0;
    };
    std::vector<Block> blocks;

    long total_length() const;
    bool empty_product() const { return total_length() == 0; }

    // Merges adjacent blocks so that interior exponents are nonzero; a word
    // whose exponents all vanish is invalid (total_length >= 1 required).
    Word normalized() const;

    // Bit i of `bits` selects the factor at position i (1 = H, 0 = R);
    // position 0 is applied first.
    static Word from_bits(std::uint64_t bits, int len);

    std::string to_string() const;  // e.g. "H^2 R^3 H"
};

// Explicit product of the pattern. Throws invalid_word on an empty product.
Matrix2 word_matrix(const Matrix2& h, const Matrix2& r, const Word& w);

struct GrowthRow {
    int length = 0;
    double min_rho = 0;       // min over all 2^L words of rho(product)^{1/L}
    double min_norm = 0;      // min over all 2^L words of ||product||^{1/L}
    Word argmin_rho;
    Word argmin_norm;
};

struct GrowthTable {
    std::vector<GrowthRow> rows;
    std::string to_csv() const;  // length,min_rho,min_norm,argmin_word
};

inline constexpr int enumeration_guard = 22;  // 2^22 products per length tops

struct EnumerateOptions {
    bool parallel = true;
};

// Exhaustive minimum of normalized spectral radius / norm over every product
// of length L <= L_max. Throws budget_exceeded beyond the enumeration guard.
GrowthTable enumerate_min_growth(const Matrix2& h, const Matrix2& r, int L_max,
                                 const EnumerateOptions& opts = {});

struct NewFormulaReport {
    int L_max = 0;
    long long words_checked = 0;
    long long violations = 0;
    double worst_slack = 0;  // min over words of lhs - bound (negative = violation)
    std::optional<Word> worst_word;
};

// Checks, for every word of total length <= L_max, that
//   rho(word)^{1/|w|} >= min( rho(R), min_{0 <= n < |w|} rho(H R^n)^{1/(n+1)} ) - 1e-12.
// Requires (h, r) in InP x InE.
NewFormulaReport verify_newformula(const Matrix2& h, const Matrix2& r, int L_max,
                                   const EnumerateOptions& opts = {});

}  // namespace lsr
