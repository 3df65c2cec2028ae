#pragma once

#include <cstdint>
#include <vector>

#include "frobstat/arith.hpp"

namespace frobstat {

class curve_family;

int kronecker(i64 a, i64 n);

// true when -16(4a^3+27b^2) == 0 mod p
bool is_singular(u64 a, u64 b, u64 p);

// a_p(E(a,b)) for p >= 5 by the Legendre-symbol sum; throws errc::singular
i64 curve_trace(i64 a, i64 b, u64 p);

// Shared per-prime data for many traces at one p: the quadratic character
// table and the cubes. Works for any odd prime.
class trace_context {
public:
    explicit trace_context(u64 p);
    u64 prime() const { return p_; }
    int chi(u64 x) const { return chi_[x]; }
    // a, b already reduced mod p; caller handles singular curves
    i64 trace(u64 a, u64 b) const;

private:
    u64 p_;
    std::vector<signed char> chi_;
    std::vector<u64> cube_;
};

struct trace_entry {
    i64 trace = 0;
    bool singular = false;
};

// one entry per residue w mod p
std::vector<trace_entry> trace_table(const curve_family& fam, u64 p);
// only residues with mask[w] set are computed; others are left default
std::vector<trace_entry> trace_table(const curve_family& fam, const trace_context& ctx,
                                     const std::vector<char>& mask);

// the 13 rational CM j-invariants
const std::vector<i64>& cm_j_invariants();
bool is_cm_j(const rational& j);

}  // namespace frobstat
