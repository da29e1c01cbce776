#include "weilspin/tower.hpp"

#include <sstream>

namespace weilspin {

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << r.get_num() << "/" << r.get_den();
    return os.str();
}

Rational rational_from_string(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw ConfigError("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

bool rational_is_square(const Rational& r) {
    if (r < 0) return false;
    return mpz_perfect_square_p(r.get_num().get_mpz_t()) &&
           mpz_perfect_square_p(r.get_den().get_mpz_t());
}

bool is_squarefree(long t) {
    if (t < 0) return false;
    if (t <= 1) return true;
    for (long p = 2; p * p <= t; ++p)
        if (t % (p * p) == 0) return false;
    return true;
}

void TowerSpec::validate() const {
    if (t < 0 || !is_squarefree(t) || t == 1)
        throw ConfigError("field.t must be a squarefree integer >= 0, not 1");
    if (q <= 0) throw ConfigError("field.q must be positive");
}

TowerElt TowerElt::mul(const TowerElt& o, const TowerSpec& spec) const {
    // (1, rt, rmq, rt*rmq) with rt^2 = t, rmq^2 = -q.
    Rational t(spec.t);
    const Rational& q = spec.q;
    Rational tq = t * q;
    return TowerElt(
        a * o.a + t * (b * o.b) - q * (c * o.c) - tq * (d * o.d),
        a * o.b + b * o.a - q * (c * o.d + d * o.c),
        a * o.c + c * o.a + t * (b * o.d + d * o.b),
        a * o.d + d * o.a + b * o.c + c * o.b);
}

TowerElt TowerElt::inv(const TowerSpec& spec) const {
    if (is_zero()) throw DivisionByZero();
    if (spec.t == 0) {
        Rational n = a * a + spec.q * (c * c);
        return TowerElt(a / n, 0, -c / n, 0);
    }
    // Multiply through by the three nontrivial Galois conjugates; the full
    // product is the rational norm.
    TowerElt p1 = galois(galois_gamma());
    TowerElt p2 = galois(galois_iota());
    TowerElt p3 = galois(galois_gamma().compose(galois_iota()));
    TowerElt num = p1.mul(p2, spec).mul(p3, spec);
    TowerElt n = mul(num, spec);
    if (!n.is_rational() || n.a == 0) throw DivisionByZero("norm vanished");
    return num.scaled(Rational(1) / n.a);
}

TowerElt TowerElt::norm_k_over_f(const TowerSpec& spec) const {
    return mul(conj(), spec);
}

std::string TowerElt::str() const {
    std::ostringstream os;
    os << "[" << rational_to_string(a) << "," << rational_to_string(b) << ","
       << rational_to_string(c) << "," << rational_to_string(d) << "]";
    return os.str();
}

int sign_at_embedding(const TowerElt& x, int embedding_index, const TowerSpec& spec) {
    if (!x.in_f()) throw FieldMismatch("sign_at_embedding expects an element of F");
    Rational a = x.a;
    Rational b = (embedding_index == 0 ? x.b : -x.b);
    if (spec.t == 0 || b == 0) return sgn(a);
    if (a == 0) return sgn(b);
    // sign of a + b sqrt(t): if the signs agree it is the common sign,
    // otherwise compare a^2 against t b^2.
    if (sgn(a) == sgn(b)) return sgn(a);
    Rational lhs = a * a, rhs = Rational(spec.t) * b * b;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sgn(a) : sgn(b);
}

bool f_is_square(const TowerElt& x, const TowerSpec& spec, TowerElt* root) {
    if (!x.in_f()) throw FieldMismatch("f_is_square expects an element of F");
    if (x.is_zero()) {
        if (root) *root = TowerElt::zero();
        return true;
    }
    if (sign_at_embedding(x, 0, spec) < 0) return false;
    if (spec.t > 0 && sign_at_embedding(x, 1, spec) < 0) return false;
    const Rational& u = x.a;
    const Rational& v = x.b;
    if (v == 0) {
        // Either u is a rational square or u/t is.
        if (rational_is_square(u)) {
            if (root) {
                Rational num(mpz_class(sqrt(u.get_num())), mpz_class(sqrt(u.get_den())));
                num.canonicalize();
                *root = TowerElt(num);
            }
            return true;
        }
        if (spec.t > 0) {
            Rational ut = u / spec.t;
            if (rational_is_square(ut)) {
                if (root) {
                    Rational num(mpz_class(sqrt(ut.get_num())), mpz_class(sqrt(ut.get_den())));
                    num.canonicalize();
                    *root = TowerElt(0, num, 0, 0);
                }
                return true;
            }
        }
        return false;
    }
    // (p + s rt)^2 = u + v rt requires p^2 + t s^2 = u and 2 p s = v, so p^2
    // solves z^2 - u z + t v^2 / 4 = 0; the discriminant u^2 - t v^2 must be
    // a rational square and one root must be a rational square as well.
    Rational disc = u * u - Rational(spec.t) * v * v;
    if (!rational_is_square(disc)) return false;
    Rational sq(mpz_class(sqrt(disc.get_num())), mpz_class(sqrt(disc.get_den())));
    sq.canonicalize();
    for (int branch = 0; branch < 2; ++branch) {
        Rational p2 = (u + (branch == 0 ? sq : -sq)) / 2;
        if (p2 < 0 || !rational_is_square(p2)) continue;
        Rational p(mpz_class(sqrt(p2.get_num())), mpz_class(sqrt(p2.get_den())));
        p.canonicalize();
        if (p == 0) continue;
        Rational s = v / (2 * p);
        if (p * p + Rational(spec.t) * s * s == u) {
            if (root) *root = TowerElt(p, s, 0, 0);
            return true;
        }
    }
    return false;
}

std::vector<CMType> enumerate_cm_types(const TowerSpec& spec) {
    int half = spec.real_degree();
    std::vector<CMType> out;
    for (int bits = 0; bits < (1 << half); ++bits) {
        CMType t;
        t.signs.resize(half);
        for (int i = 0; i < half; ++i) t.signs[i] = (bits >> i) & 1 ? -1 : 1;
        out.push_back(t);
    }
    return out;
}

CMType galois_on_type(const GaloisElt& g, const CMType& type) {
    CMType out = type;
    int half = static_cast<int>(type.signs.size());
    for (int i = 0; i < half; ++i) {
        int src = g.flip_t && half == 2 ? 1 - i : i;
        out.signs[i] = (g.flip_q ? -1 : 1) * type.signs[src];
    }
    return out;
}

GaloisElt embedding_of(int sigma_hat_index, int q_sign) {
    return GaloisElt{sigma_hat_index == 1, q_sign < 0};
}

std::vector<GaloisElt> all_galois(const TowerSpec& spec) {
    if (spec.t == 0) return {galois_identity(), galois_iota()};
    return {galois_identity(), galois_gamma(), galois_iota(),
            galois_gamma().compose(galois_iota())};
}

}  // namespace weilspin
