#pragma once

// Exact arithmetic in the biquadratic tower Q < F = Q(rt) < K = F(rmq),
// rt = sqrt(t), rmq = sqrt(-q).  t = 0 collapses F to Q and K to the
// imaginary quadratic field Q(rmq).  For rational q > 0 the field K is
// Galois over Q, so K coincides with its Galois closure and every complex
// embedding is realized by a coefficient automorphism.

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "weilspin/errors.hpp"

namespace weilspin {

using Rational = mpq_class;

std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);
bool rational_is_square(const Rational& r);

struct TowerSpec {
    long t = 0;    // squarefree, >= 0; t = 0 encodes F = Q
    Rational q;    // positive rational

    int e() const { return t > 0 ? 4 : 2; }
    int field_degree() const { return e(); }       // [K:Q]
    int real_degree() const { return e() / 2; }    // [F:Q] = #real embeddings
    void validate() const;
};

bool is_squarefree(long t);

// One of the four (two when t = 0) coefficient automorphisms of K:
// flip_t negates sqrt(t), flip_q negates sqrt(-q).  flip_q alone is the
// complex-conjugation involution; it is central.
struct GaloisElt {
    bool flip_t = false;
    bool flip_q = false;

    GaloisElt compose(const GaloisElt& other) const {
        return GaloisElt{static_cast<bool>(flip_t ^ other.flip_t),
                         static_cast<bool>(flip_q ^ other.flip_q)};
    }
    bool operator==(const GaloisElt&) const = default;
};

inline GaloisElt galois_identity() { return {false, false}; }
inline GaloisElt galois_iota() { return {false, true}; }
inline GaloisElt galois_gamma() { return {true, false}; }

// a + b sqrt(t) + c sqrt(-q) + d sqrt(-t q), all coordinates exact rationals.
// When t = 0 the b and d coordinates are identically zero.
class TowerElt {
public:
    Rational a, b, c, d;

    TowerElt() : a(0), b(0), c(0), d(0) {}
    explicit TowerElt(const Rational& a0) : a(a0), b(0), c(0), d(0) {}
    TowerElt(Rational a0, Rational b0, Rational c0, Rational d0)
        : a(std::move(a0)), b(std::move(b0)), c(std::move(c0)), d(std::move(d0)) {}

    static TowerElt zero() { return TowerElt(); }
    static TowerElt one() { return TowerElt(Rational(1)); }
    static TowerElt sqrt_t() { return TowerElt(0, 1, 0, 0); }
    static TowerElt sqrt_minus_q() { return TowerElt(0, 0, 1, 0); }
    static TowerElt sqrt_minus_tq() { return TowerElt(0, 0, 0, 1); }
    static TowerElt from_f(const Rational& a0, const Rational& b0) {
        return TowerElt(a0, b0, 0, 0);
    }

    bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }
    bool is_rational() const { return b == 0 && c == 0 && d == 0; }
    bool in_f() const { return c == 0 && d == 0; }
    bool in_k_minus() const { return a == 0 && b == 0; }

    TowerElt operator+(const TowerElt& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    TowerElt operator-(const TowerElt& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    TowerElt operator-() const { return {-a, -b, -c, -d}; }
    TowerElt& operator+=(const TowerElt& o) {
        a += o.a; b += o.b; c += o.c; d += o.d;
        return *this;
    }
    bool operator==(const TowerElt& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }

    TowerElt mul(const TowerElt& o, const TowerSpec& spec) const;
    TowerElt scaled(const Rational& r) const { return {a * r, b * r, c * r, d * r}; }
    TowerElt inv(const TowerSpec& spec) const;
    TowerElt galois(const GaloisElt& g) const {
        Rational st(g.flip_t ? -1 : 1), sq(g.flip_q ? -1 : 1);
        return {a, b * st, c * sq, d * st * sq};
    }
    TowerElt conj() const { return galois(galois_iota()); }

    // Trace down to Q: sum over all e coordinate embeddings.
    Rational trace_k(const TowerSpec& spec) const { return Rational(spec.e()) * a; }
    // Trace of an element of F down to Q.
    Rational trace_f(const TowerSpec& spec) const {
        return Rational(spec.real_degree()) * a;
    }
    // Norm from K down to F of a + b rt + (c + d rt) rmq.
    TowerElt norm_k_over_f(const TowerSpec& spec) const;

    std::string str() const;
};

// Exact sign of an element of F under the real embedding sending sqrt(t)
// to sigma_sign * sqrt(t).  Decided by rational comparisons only.
int sign_at_embedding(const TowerElt& x, int embedding_index, const TowerSpec& spec);

// Exact square test in F; if x = y^2 for some y in F, writes y to *root.
bool f_is_square(const TowerElt& x, const TowerSpec& spec, TowerElt* root = nullptr);

// A CM-type: one sign per real embedding of F, recording whether the chosen
// complex embedding above it sends sqrt(-q) to the upper half-plane.
struct CMType {
    std::vector<int> signs;  // entries +1 / -1, length e/2

    bool operator==(const CMType&) const = default;
    CMType conjugate() const {
        CMType r = *this;
        for (int& s : r.signs) s = -s;
        return r;
    }
    int overlap(const CMType& other) const {
        int k = 0;
        for (size_t i = 0; i < signs.size(); ++i)
            if (signs[i] == other.signs[i]) ++k;
        return k;
    }
};

std::vector<CMType> enumerate_cm_types(const TowerSpec& spec);

// Galois action on CM-types: permute the real embeddings by the restriction
// of g and postcompose the chosen embeddings with g.
CMType galois_on_type(const GaloisElt& g, const CMType& type);

// The complex embedding of K indexed by (real embedding, upper/lower choice),
// realized as a coefficient automorphism since K is Galois over Q.
GaloisElt embedding_of(int sigma_hat_index, int q_sign);

std::vector<GaloisElt> all_galois(const TowerSpec& spec);

}  // namespace weilspin
