#pragma once

#include <string>
#include <utility>
#include <vector>

#include "frobstat/arith.hpp"
#include "frobstat/poly.hpp"

namespace frobstat {

// Y^2 = X^3 + f(Z) X + g(Z)
class curve_family {
public:
    curve_family(poly f, poly g);
    // "f=<poly>;g=<poly>"
    static curve_family parse(const std::string& spec);

    const poly& f() const { return f_; }
    const poly& g() const { return g_; }
    const poly& disc() const { return disc_; }
    const poly& j_num() const { return q_; }
    const poly& j_den() const { return r_; }
    int degj() const { return std::max(q_.degree(), r_.degree()); }
    bool isotrivial() const { return q_.degree() <= 0 && r_.degree() <= 0; }
    u64 bad_prime_bound() const { return x0_; }
    bool bad_prime_bound_saturated() const { return x0_saturated_; }
    // smallest k with 4k >= deg f and 6k >= deg g
    unsigned weight() const { return k_; }

    // f, g reduced mod p (valid while p does not exceed the cached prime)
    std::vector<u64> f_mod(u64 p) const { return f_.reduce_mod(p); }
    std::vector<u64> g_mod(u64 p) const { return g_.reduce_mod(p); }

    // Coefficients of the integral model v^{4k} f(u/v), v^{6k} g(u/v) mod p.
    std::pair<u64, u64> model_mod(i64 u, i64 v, u64 p) const;
    rational disc_at(const rational& t) const { return disc_.eval(t); }
    // throws errc::singular when the discriminant vanishes at t
    rational j_at(const rational& t) const;
    std::string str() const;

private:
    poly f_, g_, disc_, q_, r_;
    std::vector<i64> fi_, gi_;
    unsigned k_ = 0;
    u64 x0_ = 0;
    bool x0_saturated_ = false;
};

struct fraction {
    i64 num = 0;
    i64 den = 1;
    static fraction make(i64 u, i64 v);  // reduces, den > 0
    rational value() const { return rational(num, den); }
    bool operator<(const fraction& o) const { return (i128)num * o.den < (i128)o.num * den; }
    bool operator==(const fraction& o) const { return num == o.num && den == o.den; }
};

enum class argset_kind { integers, farey, sumset, exponential_range, range, explicit_set };

struct argset_entry {
    fraction value;
    u64 mult = 1;
};

class argument_set {
public:
    static constexpr u64 default_cap = 10'000'000;

    static argument_set integers(u64 T);
    static argument_set farey(u64 T, u64 cap = default_cap);
    static argument_set range(i64 lo, i64 hi, u64 cap = default_cap);
    static argument_set exponential_range(i64 base, u64 T);
    static argument_set sumset(const argument_set& a, const argument_set& b, u64 cap = default_cap);
    static argument_set from_entries(std::vector<argset_entry> entries);
    static argument_set from_csv(const std::string& path);
    // integers:T, farey:T, range:LO:HI, geometric:BASE:T, csv:PATH, A+B for sumsets
    static argument_set parse(const std::string& spec);

    argset_kind kind() const { return kind_; }
    u64 size_parameter() const { return T_; }
    u64 cardinality() const { return card_; }
    const std::vector<argset_entry>& entries() const { return entries_; }
    bool all_integers() const;

private:
    void normalize();
    argset_kind kind_ = argset_kind::explicit_set;
    u64 T_ = 0;
    u64 card_ = 0;
    std::vector<argset_entry> entries_;
};

struct residue_profile {
    u64 p = 0;
    std::vector<u64> counts;
    u64 dropped = 0;
};

residue_profile make_residue_profile(const argument_set& s, u64 p);

struct farey_deviation {
    double max_deviation = 0;
    double envelope = 0;  // T log T + T^2/p^2
    double ratio = 0;     // fitted constant for this (T, p)
};

farey_deviation farey_R_deviation(u64 T, u64 p);

bool is_permutation_poly(const poly& q, u64 p);
bool is_near_permutation_rational(const poly& q, const poly& r, u64 p);

// j*(Z) = Z b^Z, f = -3 j*^n (j*-1728)^m h^2, g = 2 j*^{(3n-1)/2} (j*-1728)^{(3m+1)/2} h^3
class exponential_family {
public:
    exponential_family(poly h, unsigned m, unsigned n, i64 b);

    const poly& h() const { return h_; }
    unsigned m() const { return m_; }
    unsigned n() const { return n_; }
    i64 b() const { return b_; }
    u64 prime_floor() const;  // 6|b|

    // coefficients mod p at an integer argument with t mod p = tp and
    // b^t mod p = bt; singular when h(t), j or j-1728 vanish mod p
    struct coeffs {
        u64 a = 0, b = 0;
        bool singular = false;
    };
    coeffs at_mod(u64 tp, u64 bt, u64 p) const;
    // Delta(t) == 0 over Q
    bool singular_at(i64 t) const;

private:
    poly h_;
    unsigned m_, n_;
    i64 b_;
};

// R(w) for w in [0, p(p-1)); throws errc::bad_prime when p | 6b
std::vector<u64> exp_residue_profile(const argument_set& s, i64 b, u64 p);

}  // namespace frobstat
