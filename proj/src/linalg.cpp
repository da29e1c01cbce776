#include "weilspin/linalg.hpp"

#include <omp.h>

#include <algorithm>
#include <map>

namespace weilspin {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = TowerElt::one();
    return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
    Matrix out(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + o.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& o) const {
    Matrix out(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - o.data_[i];
    return out;
}

Matrix Matrix::scaled(const TowerElt& c, const TowerSpec& spec) const {
    Matrix out(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i].mul(c, spec);
    return out;
}

Matrix Matrix::mul(const Matrix& o, const TowerSpec& spec) const {
    Matrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const TowerElt& a = at(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                if (o.at(k, j).is_zero()) continue;
                out.at(i, j) += a.mul(o.at(k, j), spec);
            }
        }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

Vec Matrix::apply(const Vec& v, const TowerSpec& spec) const {
    Vec out(rows_);
    for (int i = 0; i < rows_; ++i) {
        TowerElt acc;
        for (int j = 0; j < cols_; ++j)
            if (!at(i, j).is_zero() && !v[j].is_zero()) acc += at(i, j).mul(v[j], spec);
        out[i] = std::move(acc);
    }
    return out;
}

Matrix Matrix::inverse(const TowerSpec& spec) const {
    int n = rows_;
    std::vector<Vec> rows(n, Vec(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) rows[i][j] = at(i, j);
        rows[i][n + i] = TowerElt::one();
    }
    rref(rows, spec);
    if (static_cast<int>(rows.size()) != n) throw DivisionByZero("singular matrix");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(rows[i][j] == (i == j ? TowerElt::one() : TowerElt::zero())))
                throw DivisionByZero("singular matrix");
    Matrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = rows[i][n + j];
    return out;
}

bool Matrix::is_zero() const {
    for (const auto& x : data_)
        if (!x.is_zero()) return false;
    return true;
}

bool Matrix::is_rational() const {
    for (const auto& x : data_)
        if (!x.is_rational()) return false;
    return true;
}

Matrix Matrix::galois(const GaloisElt& g) const {
    Matrix out(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i].galois(g);
    return out;
}

bool Matrix::galois_invariant(const GaloisElt& g) const { return galois(g) == *this; }

std::vector<TowerElt> Matrix::char_poly(const TowerSpec& spec) const {
    int n = rows_;
    // Faddeev-LeVerrier: M_1 = A, c_{n-1} = -tr M_1, M_{k+1} = A (M_k + c I).
    std::vector<TowerElt> coeffs(n + 1);
    coeffs[n] = TowerElt::one();
    Matrix mk = *this;
    for (int k = 1; k <= n; ++k) {
        TowerElt tr;
        for (int i = 0; i < n; ++i) tr += mk.at(i, i);
        TowerElt c = tr.scaled(Rational(-1, k));
        coeffs[n - k] = c;
        if (k == n) break;
        Matrix shifted = mk;
        for (int i = 0; i < n; ++i) shifted.at(i, i) += c;
        mk = this->mul(shifted, spec);
    }
    return coeffs;
}

Vec vec_add(const Vec& x, const Vec& y) {
    Vec out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
    return out;
}

Vec vec_sub(const Vec& x, const Vec& y) {
    Vec out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

Vec vec_scaled(const Vec& x, const TowerElt& c, const TowerSpec& spec) {
    Vec out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i].mul(c, spec);
    return out;
}

TowerElt vec_dot(const Vec& x, const Vec& y, const TowerSpec& spec) {
    TowerElt acc;
    for (size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero() && !y[i].is_zero()) acc += x[i].mul(y[i], spec);
    return acc;
}

bool vec_is_zero(const Vec& x) {
    for (const auto& v : x)
        if (!v.is_zero()) return false;
    return true;
}

int rref_serial(std::vector<Vec>& rows, const TowerSpec& spec) {
    if (rows.empty()) return 0;
    const int ncols = static_cast<int>(rows[0].size());
    int rank = 0;
    for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (!rows[r][col].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        TowerElt inv = rows[rank][col].inv(spec);
        for (int j = col; j < ncols; ++j) rows[rank][j] = rows[rank][j].mul(inv, spec);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank || rows[r][col].is_zero()) continue;
            TowerElt f = rows[r][col];
            for (int j = col; j < ncols; ++j)
                rows[r][j] = rows[r][j] - f.mul(rows[rank][j], spec);
        }
        ++rank;
    }
    rows.resize(rank);
    return rank;
}

int rref(std::vector<Vec>& rows, const TowerSpec& spec) {
    const int nthreads = kernel_threads();
    if (nthreads <= 1 || rows.size() < 16) return rref_serial(rows, spec);
    const int ncols = static_cast<int>(rows[0].size());
    int rank = 0;
    for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (!rows[r][col].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        TowerElt inv = rows[rank][col].inv(spec);
        for (int j = col; j < ncols; ++j) rows[rank][j] = rows[rank][j].mul(inv, spec);
        const Vec& prow = rows[rank];
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 4)
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank || rows[r][col].is_zero()) continue;
            TowerElt f = rows[r][col];
            for (int j = col; j < ncols; ++j)
                rows[r][j] = rows[r][j] - f.mul(prow[j], spec);
        }
        ++rank;
    }
    rows.resize(rank);
    return rank;
}

Subspace Subspace::span(int ambient, const std::vector<Vec>& vectors, const TowerSpec& spec) {
    Subspace s(ambient);
    s.rows_ = vectors;
    rref(s.rows_, spec);
    return s;
}

bool Subspace::contains(const Vec& v, const TowerSpec& spec) const {
    Vec r = v;
    for (const auto& row : rows_) {
        int p = 0;
        while (p < ambient_ && row[p].is_zero()) ++p;
        if (p == ambient_) continue;
        if (!r[p].is_zero()) {
            TowerElt f = r[p];
            for (int j = p; j < ambient_; ++j) r[j] = r[j] - f.mul(row[j], spec);
        }
    }
    return vec_is_zero(r);
}

bool Subspace::contains(const Subspace& other, const TowerSpec& spec) const {
    for (const auto& row : other.rows_)
        if (!contains(row, spec)) return false;
    return true;
}

bool Subspace::same_as(const Subspace& other, const TowerSpec& spec) const {
    return dim() == other.dim() && contains(other, spec);
}

Subspace Subspace::sum(const Subspace& other, const TowerSpec& spec) const {
    std::vector<Vec> all = rows_;
    all.insert(all.end(), other.rows_.begin(), other.rows_.end());
    return span(ambient_, all, spec);
}

Subspace Subspace::intersect(const Subspace& other, const TowerSpec& spec) const {
    // Zassenhaus: echelonize [A|A; B|0]; rows with zero left half carry the
    // intersection in their right half.
    int n = ambient_;
    std::vector<Vec> work;
    for (const auto& r : rows_) {
        Vec row(2 * n);
        for (int j = 0; j < n; ++j) row[j] = row[n + j] = r[j];
        work.push_back(std::move(row));
    }
    for (const auto& r : other.rows_) {
        Vec row(2 * n);
        for (int j = 0; j < n; ++j) row[j] = r[j];
        work.push_back(std::move(row));
    }
    rref(work, spec);
    std::vector<Vec> inter;
    for (const auto& row : work) {
        bool left_zero = true;
        for (int j = 0; j < n; ++j)
            if (!row[j].is_zero()) {
                left_zero = false;
                break;
            }
        if (left_zero) inter.push_back(Vec(row.begin() + n, row.end()));
    }
    return span(n, inter, spec);
}

std::optional<Vec> Subspace::solve(const Vec& v, const TowerSpec& spec) const {
    // Augment each basis row with the coordinate unit tracking it.
    int n = ambient_, k = dim();
    std::vector<Vec> work;
    for (int i = 0; i < k; ++i) {
        Vec row(n + k);
        for (int j = 0; j < n; ++j) row[j] = rows_[i][j];
        row[n + i] = TowerElt::one();
        work.push_back(std::move(row));
    }
    rref(work, spec);
    Vec r = v, coeff(k);
    for (const auto& row : work) {
        int p = 0;
        while (p < n && row[p].is_zero()) ++p;
        if (p == n) continue;
        if (!r[p].is_zero()) {
            TowerElt f = r[p];
            for (int j = p; j < n; ++j) r[j] = r[j] - f.mul(row[j], spec);
            for (int j = 0; j < k; ++j) coeff[j] += f.mul(row[n + j], spec);
        }
    }
    if (!vec_is_zero(r)) return std::nullopt;
    return coeff;
}

Subspace Subspace::annihilator(const Matrix& gram, const TowerSpec& spec) const {
    // {w : v^T gram w = 0 for all basis v}.
    Matrix sys(dim(), ambient_);
    for (int i = 0; i < dim(); ++i) {
        Vec lhs = gram.transpose().apply(rows_[i], spec);
        for (int j = 0; j < ambient_; ++j) sys.at(i, j) = lhs[j];
    }
    return kernel(sys, spec);
}

Subspace Subspace::kernel(const Matrix& m, const TowerSpec& spec) {
    int nr = m.rows(), nc = m.cols();
    std::vector<Vec> rows(nr, Vec(nc));
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) rows[i][j] = m.at(i, j);
    rref(rows, spec);
    std::vector<int> pivot_col;
    std::vector<bool> is_pivot(nc, false);
    for (const auto& row : rows) {
        int p = 0;
        while (p < nc && row[p].is_zero()) ++p;
        if (p < nc) {
            pivot_col.push_back(p);
            is_pivot[p] = true;
        }
    }
    std::vector<Vec> basis;
    for (int free = 0; free < nc; ++free) {
        if (is_pivot[free]) continue;
        Vec v(nc);
        v[free] = TowerElt::one();
        for (size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -rows[r][free];
        basis.push_back(std::move(v));
    }
    return span(nc, basis, spec);
}

bool Subspace::stable_under(const Matrix& m, const TowerSpec& spec) const {
    for (const auto& row : rows_)
        if (!contains(m.apply(row, spec), spec)) return false;
    return true;
}

std::vector<Vec> rational_restriction(const std::vector<Vec>& span_vectors,
                                      const TowerSpec& spec) {
    if (span_vectors.empty()) return {};
    const int n = static_cast<int>(span_vectors[0].size());
    const int k = static_cast<int>(span_vectors.size());
    // Combination sum_j lambda_j v_j with lambda_j = sum_g l_{jg} basis_g(K)
    // is rational iff the sqrt(t), sqrt(-q), sqrt(-tq) coordinate parts all
    // vanish; that is a rational linear system in the l_{jg}.
    std::vector<TowerElt> kbasis = {TowerElt::one(), TowerElt::sqrt_t(),
                                    TowerElt::sqrt_minus_q(), TowerElt::sqrt_minus_tq()};
    if (spec.t == 0) kbasis = {TowerElt::one(), TowerElt::sqrt_minus_q()};
    const int g = static_cast<int>(kbasis.size());
    const int unknowns = k * g;
    // columns of the constraint system = unknowns; rows = 3 (or 1) irrational
    // components per ambient coordinate.
    const int comps = g - 1;
    std::vector<Vec> sys(n * comps, Vec(unknowns));
    std::vector<std::vector<TowerElt>> scaled(k * g, std::vector<TowerElt>());
    for (int j = 0; j < k; ++j)
        for (int gi = 0; gi < g; ++gi) {
            std::vector<TowerElt> w(n);
            for (int i = 0; i < n; ++i) w[i] = span_vectors[j][i].mul(kbasis[gi], spec);
            scaled[j * g + gi] = std::move(w);
        }
    for (int i = 0; i < n; ++i)
        for (int u = 0; u < unknowns; ++u) {
            const TowerElt& x = scaled[u][i];
            if (spec.t == 0) {
                sys[i][u] = TowerElt(x.c);
            } else {
                sys[i * 3 + 0][u] = TowerElt(x.b);
                sys[i * 3 + 1][u] = TowerElt(x.c);
                sys[i * 3 + 2][u] = TowerElt(x.d);
            }
        }
    Matrix m(n * comps, unknowns);
    for (int i = 0; i < n * comps; ++i)
        for (int u = 0; u < unknowns; ++u) m.at(i, u) = sys[i][u];
    Subspace ker = Subspace::kernel(m, spec);
    std::vector<Vec> out;
    for (const auto& lambda : ker.basis()) {
        Vec v(n);
        for (int u = 0; u < unknowns; ++u) {
            if (lambda[u].is_zero()) continue;
            for (int i = 0; i < n; ++i) v[i] += scaled[u][i].scaled(lambda[u].a);
        }
        // keep only the rational part representative (imaginary parts vanish
        // by construction; lambda itself may have irrational coordinates
        // only through its rational solve, so v is rational already)
        if (!vec_is_zero(v)) out.push_back(std::move(v));
    }
    rref(out, spec);
    return out;
}

const std::vector<Mask>& grade_slice_masks(int rank, int grade) {
    static std::map<std::pair<int, int>, std::vector<Mask>> cache;
    static std::vector<Mask> empty;
    auto key = std::make_pair(rank, grade);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<Mask> masks;
    for (Mask m = 0; m < (Mask(1) << rank); ++m)
        if (mask_grade(m) == grade) masks.push_back(m);
    auto [pos, inserted] = cache.emplace(key, std::move(masks));
    (void)inserted;
    return pos->second;
}

int slice_index_of(int rank, int grade, Mask m) {
    const auto& masks = grade_slice_masks(rank, grade);
    auto it = std::lower_bound(masks.begin(), masks.end(), m);
    return static_cast<int>(it - masks.begin());
}

Vec mv_to_slice(const Multivector& v, int grade) {
    const auto& masks = grade_slice_masks(v.ambient_rank(), grade);
    Vec out(masks.size());
    for (const auto& t : v.terms())
        if (mask_grade(t.mask) == grade)
            out[slice_index_of(v.ambient_rank(), grade, t.mask)] = t.coeff;
    return out;
}

Multivector slice_to_mv(int rank, int grade, const Vec& coords) {
    const auto& masks = grade_slice_masks(rank, grade);
    std::vector<Multivector::Term> terms;
    for (size_t i = 0; i < masks.size(); ++i)
        if (!coords[i].is_zero()) terms.push_back({masks[i], coords[i]});
    return Multivector::from_terms(rank, std::move(terms));
}

Multivector apply_linear(const Matrix& m, const Multivector& v, const TowerSpec& spec) {
    const int rank = v.ambient_rank();
    std::vector<Multivector> columns(rank, Multivector(rank));
    for (int j = 0; j < rank; ++j) {
        std::vector<Multivector::Term> terms;
        for (int i = 0; i < rank; ++i)
            if (!m.at(i, j).is_zero()) terms.push_back({Mask(1) << i, m.at(i, j)});
        columns[j] = Multivector::from_terms(rank, std::move(terms));
    }
    std::vector<Multivector::Term> raw;
    for (const auto& t : v.terms()) {
        Multivector prod = Multivector::unit(rank);
        Mask mm = t.mask;
        while (mm && !prod.is_zero()) {
            int i = __builtin_ctz(mm);
            prod = prod.wedge(columns[i], spec);
            mm &= mm - 1;
        }
        for (const auto& pt : prod.terms()) raw.push_back({pt.mask, pt.coeff.mul(t.coeff, spec)});
    }
    return Multivector::from_terms(rank, std::move(raw));
}

Multivector apply_derivation(const Matrix& m, const Multivector& v, const TowerSpec& spec) {
    const int rank = v.ambient_rank();
    // sparse columns of the matrix
    std::vector<std::vector<std::pair<int, TowerElt>>> cols(rank);
    for (int j = 0; j < rank; ++j)
        for (int i = 0; i < rank; ++i)
            if (!m.at(i, j).is_zero()) cols[j].push_back({i, m.at(i, j)});
    std::vector<Multivector::Term> raw;
    for (const auto& t : v.terms()) {
        Mask mm = t.mask;
        int pos = 0;
        while (mm) {
            Mask low = mm & -mm;
            int i = __builtin_ctz(low);
            Mask rest = t.mask ^ low;
            // e_S = (-1)^pos e_i ^ e_rest
            for (const auto& [r, mc] : cols[i]) {
                int sgn = wedge_sign(Mask(1) << r, rest);
                if (sgn == 0) continue;
                TowerElt c = t.coeff.mul(mc, spec);
                if ((pos & 1) ^ (sgn < 0)) c = -c;
                raw.push_back({(Mask(1) << r) | rest, std::move(c)});
            }
            ++pos;
            mm ^= low;
        }
    }
    return Multivector::from_terms(rank, std::move(raw));
}

Multivector top_wedge(const Subspace& s, const TowerSpec& spec) {
    Multivector acc = Multivector::unit(s.ambient());
    for (const auto& row : s.basis()) {
        std::vector<Multivector::Term> terms;
        for (int i = 0; i < s.ambient(); ++i)
            if (!row[i].is_zero()) terms.push_back({Mask(1) << i, row[i]});
        acc = acc.wedge(Multivector::from_terms(s.ambient(), std::move(terms)), spec);
    }
    return acc;
}

}  // namespace weilspin
