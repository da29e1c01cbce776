#pragma once

// Dense exact linear algebra over a tower field: matrices, reduced row
// echelon form, subspace operations, and the bridges between multivectors
// and coordinate vectors of a fixed grade slice.

#include <optional>
#include <vector>

#include "weilspin/multivector.hpp"

namespace weilspin {

using Vec = std::vector<TowerElt>;

class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols) {}

    static Matrix identity(int n);
    static Matrix zero(int n) { return Matrix(n, n); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    TowerElt& at(int r, int c) { return data_[size_t(r) * cols_ + c]; }
    const TowerElt& at(int r, int c) const { return data_[size_t(r) * cols_ + c]; }

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(const TowerElt& c, const TowerSpec& spec) const;
    Matrix mul(const Matrix& o, const TowerSpec& spec) const;
    Matrix transpose() const;
    Vec apply(const Vec& v, const TowerSpec& spec) const;
    Matrix inverse(const TowerSpec& spec) const;  // throws DivisionByZero if singular
    bool is_zero() const;
    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }
    bool is_rational() const;
    bool galois_invariant(const GaloisElt& g) const;
    Matrix galois(const GaloisElt& g) const;

    // Characteristic polynomial coefficients c_0..c_n of det(xI - M), exact
    // Faddeev-LeVerrier recursion (divisions by integers only).
    std::vector<TowerElt> char_poly(const TowerSpec& spec) const;

private:
    int rows_, cols_;
    std::vector<TowerElt> data_;
};

Vec vec_add(const Vec& x, const Vec& y);
Vec vec_sub(const Vec& x, const Vec& y);
Vec vec_scaled(const Vec& x, const TowerElt& c, const TowerSpec& spec);
TowerElt vec_dot(const Vec& x, const Vec& y, const TowerSpec& spec);
bool vec_is_zero(const Vec& x);

// Rows in reduced echelon form over the tower field, pivots normalized to 1.
class Subspace {
public:
    Subspace() : ambient_(0) {}
    explicit Subspace(int ambient) : ambient_(ambient) {}

    static Subspace span(int ambient, const std::vector<Vec>& vectors, const TowerSpec& spec);

    int ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(rows_.size()); }
    const std::vector<Vec>& basis() const { return rows_; }

    bool contains(const Vec& v, const TowerSpec& spec) const;
    bool contains(const Subspace& other, const TowerSpec& spec) const;
    bool same_as(const Subspace& other, const TowerSpec& spec) const;

    Subspace sum(const Subspace& other, const TowerSpec& spec) const;
    Subspace intersect(const Subspace& other, const TowerSpec& spec) const;

    // Coordinates of v as a combination of the stored basis rows.
    std::optional<Vec> solve(const Vec& v, const TowerSpec& spec) const;

    // Annihilator {w : gram(v, w) = 0 for all v here} under a bilinear form.
    Subspace annihilator(const Matrix& gram, const TowerSpec& spec) const;

    // Kernel {x : M x = 0}.
    static Subspace kernel(const Matrix& m, const TowerSpec& spec);

    bool stable_under(const Matrix& m, const TowerSpec& spec) const;

private:
    int ambient_;
    std::vector<Vec> rows_;
};

// Reduced row echelon form in place; returns the rank.  Parallel row
// elimination with a serial reference (identical output, exact arithmetic).
int rref(std::vector<Vec>& rows, const TowerSpec& spec);
int rref_serial(std::vector<Vec>& rows, const TowerSpec& spec);

// The rational points of the span of the given K-coefficient vectors:
// solves for the combinations whose irrational coordinate parts vanish.
// The span must be Galois-stable for the result to have full dimension.
std::vector<Vec> rational_restriction(const std::vector<Vec>& span_vectors,
                                      const TowerSpec& spec);

// ---- multivector <-> coordinate slice bridges ----

const std::vector<Mask>& grade_slice_masks(int rank, int grade);
int slice_index_of(int rank, int grade, Mask m);
Vec mv_to_slice(const Multivector& v, int grade);
Multivector slice_to_mv(int rank, int grade, const Vec& coords);

// Multiplicative extension of a linear map to the exterior algebra: each
// generator is replaced by its image column and the factors are wedged.
Multivector apply_linear(const Matrix& m, const Multivector& v, const TowerSpec& spec);

// Derivation extension (one slot at a time), used for Hodge-type tests.
Multivector apply_derivation(const Matrix& m, const Multivector& v, const TowerSpec& spec);

// Top wedge of the rows of a subspace basis, as a multivector.
Multivector top_wedge(const Subspace& s, const TowerSpec& spec);

}  // namespace weilspin
