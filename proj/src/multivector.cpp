#include "weilspin/multivector.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>

namespace weilspin {

int kernel_threads() {
    static int cached = [] {
        if (const char* env = std::getenv("WEILSPIN_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) return v;
        }
        return omp_get_max_threads();
    }();
    return cached;
}

Multivector Multivector::term(int rank, Mask mask, TowerElt coeff) {
    Multivector m(rank);
    if (!coeff.is_zero()) m.terms_.push_back({mask, std::move(coeff)});
    return m;
}

Multivector Multivector::from_terms(int rank, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return x.mask < y.mask; });
    Multivector out(rank);
    for (auto& t : terms) {
        if (t.coeff.is_zero()) continue;
        if (!out.terms_.empty() && out.terms_.back().mask == t.mask)
            out.terms_.back().coeff += t.coeff;
        else
            out.terms_.push_back(std::move(t));
        if (out.terms_.back().coeff.is_zero()) out.terms_.pop_back();
    }
    return out;
}

TowerElt Multivector::coeff_of(Mask m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, Mask k) { return t.mask < k; });
    if (it != terms_.end() && it->mask == m) return it->coeff;
    return TowerElt::zero();
}

bool Multivector::terms_equal(const Multivector& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].mask != o.terms_[i].mask || !(terms_[i].coeff == o.terms_[i].coeff))
            return false;
    return true;
}

namespace {

// Merge two canonical term lists, summing coefficients on equal masks.
std::vector<Multivector::Term> merge_terms(const std::vector<Multivector::Term>& x,
                                           const std::vector<Multivector::Term>& y,
                                           bool negate_y) {
    std::vector<Multivector::Term> out;
    out.reserve(x.size() + y.size());
    size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].mask < y[j].mask)) {
            out.push_back(x[i++]);
        } else if (i == x.size() || y[j].mask < x[i].mask) {
            out.push_back(y[j]);
            if (negate_y) out.back().coeff = -out.back().coeff;
            ++j;
        } else {
            TowerElt c = negate_y ? x[i].coeff - y[j].coeff : x[i].coeff + y[j].coeff;
            if (!c.is_zero()) out.push_back({x[i].mask, std::move(c)});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Multivector Multivector::operator+(const Multivector& o) const {
    if (rank_ != o.rank_ && !is_zero() && !o.is_zero()) throw AmbientMismatch();
    Multivector out(std::max(rank_, o.rank_));
    out.terms_ = merge_terms(terms_, o.terms_, false);
    return out;
}

Multivector Multivector::operator-(const Multivector& o) const {
    if (rank_ != o.rank_ && !is_zero() && !o.is_zero()) throw AmbientMismatch();
    Multivector out(std::max(rank_, o.rank_));
    out.terms_ = merge_terms(terms_, o.terms_, true);
    return out;
}

Multivector Multivector::operator-() const {
    Multivector out(rank_);
    out.terms_ = terms_;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
}

Multivector Multivector::scaled(const TowerElt& c, const TowerSpec& spec) const {
    if (c.is_zero()) return Multivector(rank_);
    Multivector out(rank_);
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        TowerElt v = t.coeff.mul(c, spec);
        if (!v.is_zero()) out.terms_.push_back({t.mask, std::move(v)});
    }
    return out;
}

Multivector Multivector::scaled(const Rational& r) const {
    if (r == 0) return Multivector(rank_);
    Multivector out(rank_);
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) out.terms_.push_back({t.mask, t.coeff.scaled(r)});
    return out;
}

Multivector Multivector::wedge_serial(const Multivector& o, const TowerSpec& spec) const {
    if (rank_ != o.rank_ && !is_zero() && !o.is_zero()) throw AmbientMismatch();
    std::vector<Term> raw;
    raw.reserve(terms_.size() * o.terms_.size());
    for (const auto& s : terms_) {
        for (const auto& t : o.terms_) {
            int sgn = wedge_sign(s.mask, t.mask);
            if (sgn == 0) continue;
            TowerElt c = s.coeff.mul(t.coeff, spec);
            if (sgn < 0) c = -c;
            raw.push_back({s.mask | t.mask, std::move(c)});
        }
    }
    return from_terms(std::max(rank_, o.rank_), std::move(raw));
}

Multivector Multivector::wedge(const Multivector& o, const TowerSpec& spec) const {
    if (rank_ != o.rank_ && !is_zero() && !o.is_zero()) throw AmbientMismatch();
    const size_t work = terms_.size() * o.terms_.size();
    int nthreads = kernel_threads();
    if (nthreads <= 1 || work < 4096) return wedge_serial(o, spec);

    // Partition the left factor; each chunk produces a canonical partial
    // result, then the partials are merged pairwise in index order.  Exact
    // arithmetic makes the outcome identical to the serial evaluation.
    size_t chunk = (terms_.size() + nthreads - 1) / nthreads;
    std::vector<Multivector> partial(nthreads, Multivector(std::max(rank_, o.rank_)));
#pragma omp parallel for num_threads(nthreads) schedule(static, 1)
    for (int p = 0; p < nthreads; ++p) {
        size_t lo = p * chunk, hi = std::min(terms_.size(), lo + chunk);
        std::vector<Term> raw;
        for (size_t i = lo; i < hi; ++i) {
            for (const auto& t : o.terms_) {
                int sgn = wedge_sign(terms_[i].mask, t.mask);
                if (sgn == 0) continue;
                TowerElt c = terms_[i].coeff.mul(t.coeff, spec);
                if (sgn < 0) c = -c;
                raw.push_back({terms_[i].mask | t.mask, std::move(c)});
            }
        }
        partial[p] = from_terms(std::max(rank_, o.rank_), std::move(raw));
    }
    Multivector out = partial[0];
    for (int p = 1; p < nthreads; ++p) out = out + partial[p];
    return out;
}

Multivector Multivector::contract(const std::vector<TowerElt>& xi, const TowerSpec& spec) const {
    if (static_cast<int>(xi.size()) != rank_) throw AmbientMismatch("covector length");
    std::vector<Term> raw;
    for (const auto& t : terms_) {
        Mask m = t.mask;
        int pos = 0;
        while (m) {
            Mask low = m & -m;
            int i = __builtin_ctz(low);
            if (!xi[i].is_zero()) {
                TowerElt c = t.coeff.mul(xi[i], spec);
                if (pos & 1) c = -c;
                raw.push_back({t.mask ^ low, std::move(c)});
            }
            ++pos;
            m ^= low;
        }
    }
    return from_terms(rank_, std::move(raw));
}

Multivector Multivector::exp_truncated(const TowerSpec& spec) const {
    if (!grade_part(0).is_zero()) throw NonNilpotentOverflow("grade-0 part present");
    Multivector acc = Multivector::unit(rank_);
    Multivector power = Multivector::unit(rank_);
    Rational factorial(1);
    for (int k = 1; k <= rank_ && !power.is_zero(); ++k) {
        power = power.wedge(*this, spec);
        factorial *= k;
        acc = acc + power.scaled(Rational(1) / factorial);
    }
    return acc;
}

Multivector Multivector::grade_part(int k) const {
    Multivector out(rank_);
    for (const auto& t : terms_)
        if (mask_grade(t.mask) == k) out.terms_.push_back(t);
    return out;
}

Multivector Multivector::grades_at_least(int k) const {
    Multivector out(rank_);
    for (const auto& t : terms_)
        if (mask_grade(t.mask) >= k) out.terms_.push_back(t);
    return out;
}

Multivector Multivector::grades_at_most(int k) const {
    Multivector out(rank_);
    for (const auto& t : terms_)
        if (mask_grade(t.mask) <= k) out.terms_.push_back(t);
    return out;
}

int Multivector::min_grade() const {
    int g = -1;
    for (const auto& t : terms_) {
        int k = mask_grade(t.mask);
        if (g < 0 || k < g) g = k;
    }
    return g;
}

int Multivector::max_grade() const {
    int g = -1;
    for (const auto& t : terms_) g = std::max(g, mask_grade(t.mask));
    return g;
}

Multivector Multivector::tau() const {
    Multivector out(rank_);
    out.terms_ = terms_;
    for (auto& t : out.terms_) {
        int g = mask_grade(t.mask);
        if ((g * (g - 1) / 2) & 1) t.coeff = -t.coeff;
    }
    return out;
}

}  // namespace weilspin
