#pragma once

#include <string>
#include <vector>

#include "frobstat/arith.hpp"

namespace frobstat {

// Dense integer polynomial, c[i] is the coefficient of Z^i. Zero polynomial
// has no coefficients.
struct poly {
    std::vector<bigint> c;

    poly() = default;
    explicit poly(std::vector<bigint> coeffs);
    static poly constant(const bigint& v);
    static poly variable();

    int degree() const { return (int)c.size() - 1; }
    bool is_zero() const { return c.empty(); }
    const bigint& lead() const { return c.back(); }
    void trim();

    bigint eval(const bigint& x) const;
    rational eval(const rational& x) const;
    u64 eval_mod(u64 w, u64 p) const;
    std::vector<u64> reduce_mod(u64 p) const;

    std::string str() const;
    bool operator==(const poly& o) const { return c == o.c; }
};

poly operator+(const poly& a, const poly& b);
poly operator-(const poly& a, const poly& b);
poly operator-(const poly& a);
poly operator*(const poly& a, const poly& b);
poly operator*(const bigint& k, const poly& a);
poly pow(const poly& a, unsigned e);

bigint content(const poly& a);
poly primitive_part(const poly& a);
// exact division, throws errc::domain when b does not divide a over Z
poly exact_div(const poly& a, const poly& b);
// gcd over Q made primitive with positive leading coefficient
poly poly_gcd(const poly& a, const poly& b);
bigint resultant(const poly& a, const poly& b);

// evaluate reduced coefficient vector at w mod p (Horner)
u64 eval_mod(const std::vector<u64>& cm, u64 w, u64 p);

// Accepts expressions in Z (e.g. "Z^5+5*Z^3+5Z", "-3(Z-1)^2") or coefficient
// lists in increasing degree ("[1,0,2]" or "1,0,2").
poly parse_poly(const std::string& text);

}  // namespace frobstat
