// Benchmark comparing the OpenMP kernels against their serial references:
// sparse exterior products and exact echelon over the tower field.  Inputs
// mirror the shapes the pipeline produces: low-grade sparse multivectors
// and moderate exact matrices.

#include <omp.h>

#include <chrono>
#include <iostream>
#include <random>

#include "weilspin/linalg.hpp"

using namespace weilspin;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

Mask random_graded_mask(std::mt19937_64& rng, int rank, int grade) {
    Mask m = 0;
    std::uniform_int_distribution<int> bit(0, rank - 1);
    while (mask_grade(m) < grade) m |= Mask(1) << bit(rng);
    return m;
}

Multivector random_graded(std::mt19937_64& rng, int rank, int grade, int nterms) {
    std::uniform_int_distribution<int> coeff(-9, 9);
    std::vector<Multivector::Term> terms;
    for (int i = 0; i < nterms; ++i)
        terms.push_back({random_graded_mask(rng, rank, grade),
                         TowerElt(Rational(coeff(rng)), Rational(coeff(rng)),
                                  Rational(coeff(rng)), Rational(coeff(rng)))});
    return Multivector::from_terms(rank, std::move(terms));
}

}  // namespace

int main() {
    TowerSpec spec{3, Rational(1)};
    std::mt19937_64 rng(42);

    std::cout << "threads available: " << omp_get_max_threads() << "\n\n";
    std::cout << "kernel            size             serial(s)  parallel(s)  identical\n";

    {
        Multivector a = random_graded(rng, 20, 3, 400);
        Multivector b = random_graded(rng, 20, 4, 300);
        auto t0 = Clock::now();
        Multivector ser = a.wedge_serial(b, spec);
        auto t1 = Clock::now();
        Multivector par = a.wedge(b, spec);
        auto t2 = Clock::now();
        std::printf("wedge             %4zu x %4zu      %8.3f   %8.3f     %s\n",
                    a.term_count(), b.term_count(), seconds(t0, t1), seconds(t1, t2),
                    ser == par ? "yes" : "NO");
    }
    {
        std::uniform_int_distribution<int> coeff(-6, 6);
        std::vector<Vec> rows(32, Vec(48));
        for (auto& row : rows)
            for (auto& x : row)
                x = TowerElt(Rational(coeff(rng)), Rational(coeff(rng)), Rational(coeff(rng)),
                             Rational(0));
        std::vector<Vec> a = rows, b = rows;
        auto t0 = Clock::now();
        rref_serial(a, spec);
        auto t1 = Clock::now();
        rref(b, spec);
        auto t2 = Clock::now();
        bool same = a.size() == b.size();
        for (size_t i = 0; same && i < a.size(); ++i) same = a[i] == b[i];
        std::printf("echelon           %4d x %4d      %8.3f   %8.3f     %s\n", 32, 48,
                    seconds(t0, t1), seconds(t1, t2), same ? "yes" : "NO");
    }
    {
        // product against a truncated exponential, the transform's hot shape
        Multivector theta(16);
        for (int i = 0; i < 8; ++i)
            theta = theta + Multivector::term(16, (Mask(1) << i) | (Mask(1) << (8 + i)),
                                              TowerElt::one());
        Multivector exp_theta = theta.scaled(Rational(1, 2)).exp_truncated(spec);
        Multivector big = random_graded(rng, 16, 4, 800);
        auto t0 = Clock::now();
        Multivector ser = exp_theta.wedge_serial(big, spec);
        auto t1 = Clock::now();
        Multivector par = exp_theta.wedge(big, spec);
        auto t2 = Clock::now();
        std::printf("exp-wedge         %4zu x %4zu      %8.3f   %8.3f     %s\n",
                    exp_theta.term_count(), big.term_count(), seconds(t0, t1), seconds(t1, t2),
                    ser == par ? "yes" : "NO");
    }
    return 0;
}
