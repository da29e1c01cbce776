#pragma once

// Sparse exterior algebra over a tower field.  Terms are keyed by generator
// bitmasks; the grade of a term is the popcount of its mask.  All products
// carry exact Koszul signs computed from transposition counts.

#include <cstdint>
#include <vector>

#include "weilspin/tower.hpp"

namespace weilspin {

using Mask = uint32_t;

inline int mask_grade(Mask m) { return __builtin_popcount(m); }

// Sign of merging the sorted factors e_A wedge e_B; 0 if they share a bit.
// Counts the transpositions needed to interleave B past A.
inline int wedge_sign(Mask a, Mask b) {
    if (a & b) return 0;
    int inv = 0;
    Mask bb = b;
    while (bb) {
        Mask low = bb & -bb;
        inv += __builtin_popcount(a & ~(low | (low - 1)));
        bb ^= low;
    }
    return (inv & 1) ? -1 : 1;
}

class Multivector {
public:
    struct Term {
        Mask mask;
        TowerElt coeff;
    };

    Multivector() : rank_(0) {}
    explicit Multivector(int ambient_rank) : rank_(ambient_rank) {}

    static Multivector unit(int rank) { return term(rank, 0, TowerElt::one()); }
    static Multivector generator(int rank, int i) {
        return term(rank, Mask(1) << i, TowerElt::one());
    }
    static Multivector term(int rank, Mask mask, TowerElt coeff);

    int ambient_rank() const { return rank_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    TowerElt coeff_of(Mask m) const;

    Multivector operator+(const Multivector& o) const;
    Multivector operator-(const Multivector& o) const;
    Multivector operator-() const;
    Multivector scaled(const TowerElt& c, const TowerSpec& spec) const;
    Multivector scaled(const Rational& r) const;

    Multivector wedge(const Multivector& o, const TowerSpec& spec) const;
    Multivector wedge_serial(const Multivector& o, const TowerSpec& spec) const;

    // Interior product against a covector given in the dual generator basis.
    Multivector contract(const std::vector<TowerElt>& xi, const TowerSpec& spec) const;

    // Sum of b^k / k! while the powers survive; requires no grade-0 part.
    Multivector exp_truncated(const TowerSpec& spec) const;

    Multivector grade_part(int k) const;
    Multivector grades_at_least(int k) const;  // F_k
    Multivector grades_at_most(int k) const;   // F^k
    int min_grade() const;  // -1 when zero
    int max_grade() const;

    // Multiplication by (-1)^{g(g-1)/2} on each grade-g part.
    Multivector tau() const;

    bool operator==(const Multivector& o) const {
        return rank_ == o.rank_ && terms_equal(o);
    }

    // Canonical term list, ascending masks, used directly for serialization.
    static Multivector from_terms(int rank, std::vector<Term> terms);

private:
    bool terms_equal(const Multivector& o) const;
    int rank_;
    std::vector<Term> terms_;  // ascending mask order, no zero coefficients
};

// Number of independent kernel threads the library will use; honors the
// WEILSPIN_THREADS environment variable, defaults to the OpenMP maximum.
int kernel_threads();

}  // namespace weilspin
