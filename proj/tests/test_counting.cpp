#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "frobstat/classnum.hpp"
#include "frobstat/counting.hpp"
#include "frobstat/ffcurve.hpp"
#include "oracle.hpp"

using namespace frobstat;

namespace {

struct fam_spec {
    const char* text;
    std::vector<i64> f, g;
};

const std::vector<fam_spec> fams = {
    {"f=Z;g=Z^2+1", {0, 1}, {1, 0, 1}},
    {"f=-3Z^2+1;g=2Z^3-Z", {1, 0, -3}, {0, -1, 0, 2}},
    {"f=0;g=Z", {0}, {0, 1}},
    {"f=Z^3-2;g=5", {-2, 0, 0, 1}, {5}},
};

// specialization at t = u/v reduced mod p; falls back to the library model only when p | v
std::pair<u64, u64> at(const fam_spec& fs, const curve_family& fam, const fraction& t, u64 p) {
    if (t.den % (i64)p == 0) return fam.model_mod(t.num, t.den, p);
    u64 w = oracle::md(t.num, p) * oracle::inv(oracle::md(t.den, p), p) % p;
    return {(u64)oracle::eval(fs.f, (i64)w, p), (u64)oracle::eval(fs.g, (i64)w, p)};
}

argument_set random_set(std::mt19937_64& rng, const curve_family& fam, int n) {
    std::vector<argset_entry> es;
    for (int i = 0; i < n; ++i) {
        auto fr = fraction::make((i64)(rng() % 41) - 20, (i64)(rng() % 7) + 1);
        if (fam.disc_at(fr.value()) == 0) continue;
        es.push_back({fr, 1 + rng() % 2});
    }
    return argument_set::from_entries(es);
}

}  // namespace

TEST_CASE("avg_single equals the direct double loop") {
    std::mt19937_64 rng(11);
    for (int inst = 0; inst < 16; ++inst) {
        const auto& fs = fams[inst % fams.size()];
        auto fam = curve_family::parse(fs.text);
        auto S = random_set(rng, fam, 25);
        i64 tau = (i64)(rng() % 7) - 3;
        std::vector<u64> xs{100, 250, 400};
        auto reps = avg_single(S, fam, trace_sequence::constant(tau), xs);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            u64 brute = 0;
            for (const auto& e : S.entries())
                for (u64 p : oracle::primes(5, xs[k])) {
                    auto [a, b] = at(fs, fam, e.value, p);
                    if (!oracle::singular(a, b, p) && oracle::trace(a, b, p) == tau) brute += e.mult;
                }
            CHECK(reps[k].total == brute);
            CHECK(reps[k].x == xs[k]);
        }
    }
}

TEST_CASE("avg_pair equals the direct triple loop") {
    std::mt19937_64 rng(5);
    for (int inst = 0; inst < 6; ++inst) {
        const auto& f1 = fams[inst % fams.size()];
        const auto& f2 = fams[(inst + 1) % fams.size()];
        auto fam1 = curve_family::parse(f1.text), fam2 = curve_family::parse(f2.text);
        auto S0 = random_set(rng, fam1, 12);
        std::vector<argset_entry> keep;
        for (const auto& e : S0.entries())
            if (fam2.disc_at(e.value.value()) != 0) keep.push_back(e);
        auto S = argument_set::from_entries(keep);
        i64 t1 = (i64)(rng() % 5) - 2, t2 = (i64)(rng() % 5) - 2;
        auto rep = avg_pair(S, fam1, fam2, trace_sequence::constant(t1), trace_sequence::constant(t2), {150}).front();
        u64 brute = 0;
        for (u64 p : oracle::primes(5, 150))
            for (const auto& e1 : S.entries())
                for (const auto& e2 : S.entries()) {
                    auto [a1, b1] = at(f1, fam1, e1.value, p);
                    auto [a2, b2] = at(f2, fam2, e2.value, p);
                    if (oracle::singular(a1, b1, p) || oracle::singular(a2, b2, p)) continue;
                    if (oracle::trace(a1, b1, p) == t1 && oracle::trace(a2, b2, p) == t2) brute += e1.mult * e2.mult;
                }
        CHECK(rep.total == brute);
        auto diag = avg_pair(S, fam1, fam2, trace_sequence::constant(t1), trace_sequence::constant(t2), {150}, {},
                             true)
                        .front();
        u64 bd = 0;
        for (u64 p : oracle::primes(5, 150))
            for (const auto& e : S.entries()) {
                auto [a1, b1] = at(f1, fam1, e.value, p);
                auto [a2, b2] = at(f2, fam2, e.value, p);
                if (oracle::singular(a1, b1, p) || oracle::singular(a2, b2, p)) continue;
                if (oracle::trace(a1, b1, p) == t1 && oracle::trace(a2, b2, p) == t2) bd += e.mult;
            }
        CHECK(diag.total == bd);
    }
}

TEST_CASE("congruence classes, CM exclusion and per-prime tallies") {
    auto fam = curve_family::parse("f=0;g=Z");  // every member has j = 0
    auto S = argument_set::integers(10);
    count_options opt;
    opt.cc = {1, 4};
    opt.per_prime = true;
    auto rep = avg_single(S, fam, trace_sequence::constant(2), {300}, opt).front();
    u64 brute = 0;
    for (u64 p : oracle::primes(5, 300)) {
        if (p % 4 != 1) continue;
        for (i64 t = 1; t <= 10; ++t)
            if (!oracle::singular(0, oracle::md(t, p), p) && oracle::trace(0, oracle::md(t, p), p) == 2) ++brute;
    }
    CHECK(rep.total == brute);
    CHECK(rep.excluded_cm == brute);
    u64 per = 0;
    for (auto [p, h] : rep.per_prime) {
        CHECK(p % 4 == 1);
        per += h;
    }
    CHECK(per == brute);
    opt.exclude_cm = true;
    auto ex = avg_single(S, fam, trace_sequence::constant(2), {300}, opt).front();
    CHECK(ex.total == 0);
    CHECK(ex.excluded_cm == brute);
    opt.cc = {2, 4};
    CHECK_THROWS_AS(avg_single(S, fam, trace_sequence::constant(2), {300}, opt), error);
    CHECK_THROWS_AS(avg_single(S, fam, trace_sequence::constant(2), {300, 200}), error);
}

TEST_CASE("pi_single matches a singleton average") {
    auto fam = curve_family::parse("f=Z;g=Z^2+1");
    auto t = fraction::make(3, 2);
    auto one = pi_single(t, fam, trace_sequence::constant(-1), 500);
    auto avg = avg_single(argument_set::from_entries({{t, 1}}), fam, trace_sequence::constant(-1), {500}).front();
    CHECK(one.total == avg.total);
}

TEST_CASE("extremal sequences count edge-of-interval traces") {
    auto fam = curve_family::parse("f=Z;g=1");
    auto S = argument_set::range(1, 30);
    auto rep = avg_single(S, fam, trace_sequence::extremal(seq_kind::extremal_both), {200}).front();
    u64 brute = 0;
    for (u64 p : oracle::primes(5, 200)) {
        i64 m = 0;
        while ((m + 1) * (m + 1) <= 4 * (i64)p) ++m;
        for (i64 t = 1; t <= 30; ++t) {
            u64 a = oracle::md(t, p);
            if (oracle::singular(a, 1, p)) continue;
            i64 tr = oracle::trace(a, 1, p);
            if (tr == m || tr == -m) ++brute;
        }
    }
    CHECK(rep.total == brute);
}

TEST_CASE("exp_count equals a direct loop over the exponential family") {
    exponential_family fam(parse_poly("Z+3"), 1, 1, 2);
    auto S = argument_set::range(-20, 60);
    auto rep = exp_count(S, fam, trace_sequence::constant(1), {120}).front();
    u64 brute = 0;
    for (u64 p : oracle::primes(13, 120))
        for (i64 t = -20; t <= 60; ++t) {
            u64 tp = oracle::md(t, p);
            i64 e = t % (i64)(p - 1);
            if (e < 0) e += (i64)(p - 1);
            u64 bt = 1;
            for (i64 k = 0; k < e; ++k) bt = bt * 2 % p;
            u64 j = tp * bt % p, jm = (j + p - 1728 % p) % p, h = (tp + 3) % p;
            if (j == 0 || jm == 0 || h == 0) continue;
            // f = -3 j (j-1728) h^2, g = 2 j (j-1728)^2 h^3
            u64 a = (p - 3 * j % p * jm % p * h % p * h % p) % p;
            u64 b = 2 * j % p * jm % p * jm % p * h % p * h % p * h % p;
            if (oracle::singular(a, b, p)) continue;
            if (oracle::trace(a, b, p) == 1) ++brute;
        }
    CHECK(rep.total == brute);
}

TEST_CASE("isolated lambda defect agrees with a direct count") {
    exponential_family fam(parse_poly("1"), 1, 1, 2);
    for (u64 p : {13, 17, 19}) {
        auto r = isolam_defect(fam, 1, p);
        u64 brute = 0;
        for (u64 w = 0; w < p * (p - 1); ++w) {
            u64 tp = w % p, bt = 1;
            for (u64 k = 0; k < w % (p - 1); ++k) bt = bt * 2 % p;
            u64 j = tp * bt % p, jm = (j + p - 1728 % p) % p;
            if (j == 0 || jm == 0) continue;
            u64 a = (p - 3 * j % p * jm % p) % p, b = 2 * j % p * jm % p * jm % p;
            if (!oracle::singular(a, b, p) && oracle::trace(a, b, p) == 1) ++brute;
        }
        CHECK(r.count == brute);
        CHECK(r.main_term * 12 == rational(bigint(p - 1) * oracle::h12(4 * p - 1)));
        CHECK(r.defect == rational(brute) - r.main_term);
    }
    CHECK_THROWS_AS(isolam_defect(fam, 1, 11 * 11), error);
    CHECK_THROWS_AS(isolam_defect(fam, 1, 3), error);  // p | 6b
    CHECK_THROWS_AS(isolam_defect(fam, 9, 13), error);  // |tau| >= 2 sqrt(p)
}

TEST_CASE("custom trace sequences require an entry per prime") {
    auto fam = curve_family::parse("f=Z;g=1");
    auto seq = trace_sequence::custom({{5, 1}, {7, 0}});
    CHECK_THROWS_AS(avg_single(argument_set::integers(3), fam, seq, {20}), error);
    auto ok = avg_single(argument_set::integers(3), fam, seq, {7});
    CHECK(ok.front().primes_used == 2);
}
