#pragma once

#include <map>
#include <string>
#include <vector>

#include "frobstat/arith.hpp"
#include "frobstat/families.hpp"

namespace frobstat {

enum class seq_kind { constant, extremal_plus, extremal_minus, extremal_both, custom };

class trace_sequence {
public:
    static trace_sequence constant(i64 tau);
    static trace_sequence extremal(seq_kind kind);
    static trace_sequence custom(std::map<u64, i64> table);
    // CSV rows "p,value"
    static trace_sequence from_csv(const std::string& path);

    seq_kind kind() const { return kind_; }
    i64 tau() const { return tau_; }
    std::string name() const;

    // number of targets (1 or 2) written to out
    int eval(u64 p, i64 out[2]) const;
    bool hits(i64 trace, u64 p) const;

private:
    seq_kind kind_ = seq_kind::constant;
    i64 tau_ = 0;
    std::map<u64, i64> table_;
};

struct congruence_class {
    u64 ups = 0;
    u64 om = 1;
    void validate() const;
    bool contains(u64 p) const { return p % om == ups % om; }
};

struct count_report {
    u64 x = 0;
    u64 total = 0;
    u64 excluded_cm = 0;        // CM-attributable hits (dropped from total when excluding)
    u64 excluded_singular = 0;  // (element, prime) pairs with singular reduction
    u64 primes_used = 0;
    u64 cardinality = 0;
    bool cm_dropped = false;
    std::vector<std::pair<u64, u64>> per_prime;  // (p, hits at p), when requested
};

struct count_options {
    congruence_class cc;
    bool exclude_cm = false;
    bool per_prime = false;
};

// xs must be strictly increasing; one report per bound
count_report pi_single(const fraction& t, const curve_family& fam, const trace_sequence& A, u64 x,
                       const count_options& opt = {});
std::vector<count_report> avg_single(const argument_set& S, const curve_family& fam, const trace_sequence& A,
                                     const std::vector<u64>& xs, const count_options& opt = {});
// diagonal = true restricts to t1 = t2 (exploratory, not the paper's sum)
std::vector<count_report> avg_pair(const argument_set& S, const curve_family& fam1, const curve_family& fam2,
                                   const trace_sequence& A1, const trace_sequence& A2, const std::vector<u64>& xs,
                                   const count_options& opt = {}, bool diagonal = false);
std::vector<count_report> exp_count(const argument_set& S, const exponential_family& fam, const trace_sequence& A,
                                    const std::vector<u64>& xs, const count_options& opt = {});

struct isolam_result {
    u64 p = 0;
    u64 count = 0;
    rational main_term;  // (p-1) H(4p - tau^2)
    rational defect;     // count - main_term
    double defect_over_p = 0;
};

isolam_result isolam_defect(const exponential_family& fam, i64 tau, u64 p);

void validate_grid(const std::vector<u64>& xs);

}  // namespace frobstat
