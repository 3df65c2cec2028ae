#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frobstat/arith.hpp"

namespace frobstat {

struct class_number_result {
    u64 h = 0;
    unsigned w = 1;
};

// primitive reduced forms of discriminant d < 0, d = 0,1 mod 4
class_number_result class_number(i64 d);

// 12 * H(n), exact; H(0) = 0
u64 hurwitz12(u64 n);

class hurwitz_table {
public:
    static constexpr u64 default_cap = 400'000'000;
    static constexpr const char* magic = "HURW1";

    hurwitz_table() = default;
    // one pass over all reduced forms with 4ac - b^2 <= N
    static hurwitz_table build(u64 N, u64 cap = default_cap);
    // nullopt when the file is missing, has a different schema, is corrupt,
    // or covers fewer than min_N entries
    static std::optional<hurwitz_table> load(const std::string& path, u64 min_N);
    void save(const std::string& path) const;
    // load when usable, otherwise build and write back
    static hurwitz_table load_or_build(const std::string& path, u64 N, u64 cap = default_cap);

    u64 bound() const { return N_; }
    // throws errc::cache when n > N
    u64 value12(u64 n) const;
    const std::vector<u64>& values() const { return v_; }

private:
    u64 N_ = 0;
    std::vector<u64> v_{0};
};

struct deuring_result {
    u64 lhs = 0;
    rational rhs;
    bool holds = false;
};

// #{(a,b) in F_p^2 nonsingular with a_p = tau} against (p-1)/2 * H(4p - tau^2)
deuring_result deuring_check(u64 p, i64 tau);

// trace histogram over all nonsingular (a,b) in F_p^2, index trace + bound
std::vector<u64> trace_histogram(u64 p);

}  // namespace frobstat
