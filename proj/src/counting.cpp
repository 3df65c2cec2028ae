#include "frobstat/counting.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "frobstat/classnum.hpp"
#include "frobstat/ffcurve.hpp"
#include "frobstat/parallel.hpp"

namespace frobstat {

trace_sequence trace_sequence::constant(i64 tau) {
    trace_sequence s;
    s.kind_ = seq_kind::constant;
    s.tau_ = tau;
    return s;
}

trace_sequence trace_sequence::extremal(seq_kind kind) {
    if (kind == seq_kind::constant || kind == seq_kind::custom)
        throw error(errc::domain, "not an extremal sequence kind");
    trace_sequence s;
    s.kind_ = kind;
    return s;
}

trace_sequence trace_sequence::custom(std::map<u64, i64> table) {
    trace_sequence s;
    s.kind_ = seq_kind::custom;
    s.table_ = std::move(table);
    return s;
}

trace_sequence trace_sequence::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io, "cannot open trace table " + path);
    std::map<u64, i64> table;
    std::string line;
    u64 lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw error(errc::parse, path + ":" + std::to_string(lineno) + ": expected p,value");
        try {
            table[std::stoull(a)] = std::stoll(b);
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header
            throw error(errc::parse, path + ":" + std::to_string(lineno) + ": expected p,value");
        }
    }
    return custom(std::move(table));
}

std::string trace_sequence::name() const {
    switch (kind_) {
        case seq_kind::constant: return "constant:" + std::to_string(tau_);
        case seq_kind::extremal_plus: return "extremal-plus";
        case seq_kind::extremal_minus: return "extremal-minus";
        case seq_kind::extremal_both: return "extremal-both";
        case seq_kind::custom: return "custom";
    }
    return "";
}

int trace_sequence::eval(u64 p, i64 out[2]) const {
    i64 m = (i64)isqrt(4 * p);
    switch (kind_) {
        case seq_kind::constant: out[0] = tau_; return 1;
        case seq_kind::extremal_plus: out[0] = m; return 1;
        case seq_kind::extremal_minus: out[0] = -m; return 1;
        case seq_kind::extremal_both:
            out[0] = m;
            out[1] = -m;
            return 2;
        case seq_kind::custom: {
            auto it = table_.find(p);
            if (it == table_.end()) throw error(errc::missing, "custom trace table has no entry for p = " + std::to_string(p));
            out[0] = it->second;
            return 1;
        }
    }
    return 0;
}

bool trace_sequence::hits(i64 trace, u64 p) const {
    i64 t[2];
    int n = eval(p, t);
    for (int i = 0; i < n; ++i)
        if (t[i] == trace) return true;
    return false;
}

void congruence_class::validate() const {
    if (om == 0) throw error(errc::domain, "congruence modulus must be >= 1");
    if (gcd(ups % om, om) != 1 && om != 1) throw error(errc::domain, "congruence class needs gcd(upsilon, omega) = 1");
}

void validate_grid(const std::vector<u64>& xs) {
    if (xs.empty()) throw error(errc::domain, "empty x grid");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] <= xs[i - 1]) throw error(errc::domain, "x grid must be strictly increasing");
}

namespace {

struct prime_tally {
    u64 hits = 0, cm_hits = 0, singular = 0;
};

std::vector<u64> counting_primes(u64 xmax, const congruence_class& cc, u64 floor_exclusive = 4) {
    std::vector<u64> out;
    for (u64 p : primes_up_to(xmax))
        if (p > floor_exclusive && p >= 5 && cc.contains(p)) out.push_back(p);
    return out;
}

std::vector<count_report> assemble(const std::vector<u64>& primes, const std::vector<prime_tally>& tally,
                                   const std::vector<u64>& xs, const count_options& opt, u64 card) {
    std::vector<count_report> out;
    std::size_t i = 0;
    count_report acc;
    acc.cardinality = card;
    acc.cm_dropped = opt.exclude_cm;
    for (u64 x : xs) {
        while (i < primes.size() && primes[i] <= x) {
            const auto& t = tally[i];
            acc.total += opt.exclude_cm ? t.hits - t.cm_hits : t.hits;
            acc.excluded_cm += t.cm_hits;
            acc.excluded_singular += t.singular;
            acc.primes_used += 1;
            if (opt.per_prime) acc.per_prime.push_back({primes[i], opt.exclude_cm ? t.hits - t.cm_hits : t.hits});
            ++i;
        }
        acc.x = x;
        out.push_back(acc);
    }
    return out;
}

}  // namespace

count_report pi_single(const fraction& t, const curve_family& fam, const trace_sequence& A, u64 x,
                       const count_options& opt) {
    opt.cc.validate();
    if (fam.disc_at(t.value()) == 0) throw error(errc::singular, "discriminant vanishes at the argument");
    bool cm = is_cm_j(fam.j_at(t.value()));
    auto primes = counting_primes(x, opt.cc);
    std::vector<prime_tally> tally(primes.size());
    parallel_for(primes.size(), [&](std::size_t i) {
        u64 p = primes[i];
        auto [a, b] = fam.model_mod(t.num, t.den, p);
        if (is_singular(a, b, p)) {
            tally[i].singular = 1;
            return;
        }
        trace_context ctx(p);
        if (A.hits(ctx.trace(a, b), p)) {
            tally[i].hits = 1;
            tally[i].cm_hits = cm ? 1 : 0;
        }
    });
    return assemble(primes, tally, {x}, opt, 1).front();
}

std::vector<count_report> avg_single(const argument_set& S, const curve_family& fam, const trace_sequence& A,
                                     const std::vector<u64>& xs, const count_options& opt) {
    validate_grid(xs);
    opt.cc.validate();
    std::vector<argset_entry> cm;
    for (const auto& e : S.entries()) {
        rational tv = e.value.value();
        if (fam.disc_at(tv) != 0 && is_cm_j(fam.j_at(tv))) cm.push_back(e);
    }
    auto primes = counting_primes(xs.back(), opt.cc);
    std::vector<prime_tally> tally(primes.size());
    parallel_for(primes.size(), [&](std::size_t i) {
        u64 p = primes[i];
        trace_context ctx(p);
        auto prof = make_residue_profile(S, p);
        std::vector<char> mask(p);
        for (u64 w = 0; w < p; ++w) mask[w] = prof.counts[w] > 0;
        auto tab = trace_table(fam, ctx, mask);
        prime_tally& t = tally[i];
        for (u64 w = 0; w < p; ++w) {
            if (!mask[w]) continue;
            if (tab[w].singular)
                t.singular += prof.counts[w];
            else if (A.hits(tab[w].trace, p))
                t.hits += prof.counts[w];
        }
        if (prof.dropped) {
            for (const auto& e : S.entries()) {
                if (e.value.den % (i64)p != 0) continue;
                auto [a, b] = fam.model_mod(e.value.num, e.value.den, p);
                if (is_singular(a, b, p))
                    t.singular += e.mult;
                else if (A.hits(ctx.trace(a, b), p))
                    t.hits += e.mult;
            }
        }
        for (const auto& e : cm) {
            auto [a, b] = fam.model_mod(e.value.num, e.value.den, p);
            if (!is_singular(a, b, p) && A.hits(ctx.trace(a, b), p)) t.cm_hits += e.mult;
        }
    });
    return assemble(primes, tally, xs, opt, S.cardinality());
}

namespace {

struct side_tally {
    std::vector<char> hit, singular;  // per residue
};

side_tally side(const curve_family& fam, const trace_sequence& A, const trace_context& ctx,
                const std::vector<char>& mask) {
    u64 p = ctx.prime();
    auto tab = trace_table(fam, ctx, mask);
    side_tally s{std::vector<char>(p, 0), std::vector<char>(p, 0)};
    for (u64 w = 0; w < p; ++w) {
        if (!mask[w]) continue;
        s.singular[w] = tab[w].singular;
        s.hit[w] = !tab[w].singular && A.hits(tab[w].trace, p);
    }
    return s;
}

}  // namespace

std::vector<count_report> avg_pair(const argument_set& S, const curve_family& fam1, const curve_family& fam2,
                                   const trace_sequence& A1, const trace_sequence& A2, const std::vector<u64>& xs,
                                   const count_options& opt, bool diagonal) {
    validate_grid(xs);
    opt.cc.validate();
    count_options o = opt;
    o.exclude_cm = false;
    u64 card = S.cardinality();
    auto primes = counting_primes(xs.back(), opt.cc);
    std::vector<prime_tally> tally(primes.size());
    parallel_for(primes.size(), [&](std::size_t i) {
        u64 p = primes[i];
        trace_context ctx(p);
        auto prof = make_residue_profile(S, p);
        std::vector<char> mask(p);
        for (u64 w = 0; w < p; ++w) mask[w] = prof.counts[w] > 0;
        side_tally s1 = side(fam1, A1, ctx, mask), s2 = side(fam2, A2, ctx, mask);
        u64 h1 = 0, h2 = 0, n1 = 0, n2 = 0, both = 0, either_sing = 0;
        for (u64 w = 0; w < p; ++w) {
            u64 c = prof.counts[w];
            if (!c) continue;
            h1 += s1.hit[w] * c;
            h2 += s2.hit[w] * c;
            n1 += s1.singular[w] * c;
            n2 += s2.singular[w] * c;
            both += (s1.hit[w] && s2.hit[w]) * c;
            either_sing += (s1.singular[w] || s2.singular[w]) * c;
        }
        if (prof.dropped) {
            for (const auto& e : S.entries()) {
                if (e.value.den % (i64)p != 0) continue;
                auto [a1, b1] = fam1.model_mod(e.value.num, e.value.den, p);
                auto [a2, b2] = fam2.model_mod(e.value.num, e.value.den, p);
                bool sg1 = is_singular(a1, b1, p), sg2 = is_singular(a2, b2, p);
                bool ht1 = !sg1 && A1.hits(ctx.trace(a1, b1), p);
                bool ht2 = !sg2 && A2.hits(ctx.trace(a2, b2), p);
                h1 += ht1 * e.mult;
                h2 += ht2 * e.mult;
                n1 += sg1 * e.mult;
                n2 += sg2 * e.mult;
                both += (ht1 && ht2) * e.mult;
                either_sing += (sg1 || sg2) * e.mult;
            }
        }
        prime_tally& t = tally[i];
        if (diagonal) {
            t.hits = both;
            t.singular = either_sing;
        } else {
            t.hits = h1 * h2;
            t.singular = card * card - (card - n1) * (card - n2);
        }
    });
    return assemble(primes, tally, xs, o, diagonal ? card : card * card);
}

std::vector<count_report> exp_count(const argument_set& S, const exponential_family& fam, const trace_sequence& A,
                                    const std::vector<u64>& xs, const count_options& opt) {
    validate_grid(xs);
    opt.cc.validate();
    if (!S.all_integers()) throw error(errc::domain, "exponential families need integer arguments");
    count_options o = opt;
    o.exclude_cm = false;
    auto primes = counting_primes(xs.back(), opt.cc, fam.prime_floor());
    std::vector<prime_tally> tally(primes.size());
    parallel_for(primes.size(), [&](std::size_t i) {
        u64 p = primes[i];
        u64 M = p * (p - 1);
        // sparse residue profile mod p(p-1)
        std::map<u64, u64> prof;
        for (const auto& e : S.entries()) prof[mod_signed(e.value.num, M)] += e.mult;
        trace_context ctx(p);
        u64 bm = mod_signed(fam.b(), p);
        prime_tally& t = tally[i];
        for (const auto& [w, c] : prof) {
            auto co = fam.at_mod(w % p, powmod(bm, w % (p - 1), p), p);
            if (co.singular || is_singular(co.a, co.b, p)) {
                t.singular += c;
                continue;
            }
            if (A.hits(ctx.trace(co.a, co.b), p)) t.hits += c;
        }
    });
    return assemble(primes, tally, xs, o, S.cardinality());
}

isolam_result isolam_defect(const exponential_family& fam, i64 tau, u64 p) {
    if (!is_prime(p)) throw error(errc::precondition, "isolam_defect needs a prime");
    if (fam.prime_floor() % p == 0) throw error(errc::bad_prime, "isolam_defect needs p not dividing 6b");
    if ((u128)((i128)tau * tau) >= 4 * (u128)p) throw error(errc::precondition, "isolam_defect needs |tau| < 2 sqrt(p)");
    u64 M = p * (p - 1);
    u64 bm = mod_signed(fam.b(), p);
    std::vector<u64> bpow(p - 1);
    bpow[0] = 1;
    for (u64 e = 1; e + 1 < p; ++e) bpow[e] = mulmod(bpow[e - 1], bm, p);
    trace_context ctx(p);
    std::unordered_map<u64, i64> cache;
    isolam_result r;
    r.p = p;
    for (u64 w = 0; w < M; ++w) {
        auto co = fam.at_mod(w % p, bpow[w % (p - 1)], p);
        if (co.singular || is_singular(co.a, co.b, p)) continue;
        u64 key = co.a * p + co.b;
        auto it = cache.find(key);
        i64 tr;
        if (it == cache.end()) {
            tr = ctx.trace(co.a, co.b);
            cache.emplace(key, tr);
        } else {
            tr = it->second;
        }
        if (tr == tau) ++r.count;
    }
    u64 h12 = hurwitz12(4 * p - (u64)(tau * tau));
    r.main_term = rational(bigint(p - 1) * h12, 12);
    r.defect = rational(r.count) - r.main_term;
    r.defect_over_p = (r.defect / p).convert_to<double>();
    return r;
}

}  // namespace frobstat
