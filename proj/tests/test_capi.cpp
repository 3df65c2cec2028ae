#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "frobstat/frobstat.h"

// only the C interface is used here; expected values come from small hand checks

TEST_CASE("status codes and last error") {
    int64_t t = 0;
    CHECK(frob_trace(1, 1, 101, &t) == FROB_OK);
    CHECK(t == -3);
    CHECK(frob_trace(0, 0, 101, &t) == FROB_E_SINGULAR);
    CHECK(std::strlen(frob_last_error()) > 0);
    CHECK(frob_trace(1, 1, 100, &t) == FROB_E_DOMAIN);
    CHECK(frob_trace(1, 1, 101, nullptr) == FROB_E_DOMAIN);
    CHECK(std::string(frob_version()) == "0.1.0");
    frob_family* f = nullptr;
    CHECK(frob_family_parse("f=Z;g=", &f) == FROB_E_PARSE);
    CHECK(f == nullptr);
}

TEST_CASE("kronecker, class numbers and Deuring") {
    int k = 0;
    CHECK(frob_kronecker(2, 7, &k) == FROB_OK);
    CHECK(k == 1);
    CHECK(frob_kronecker(3, 7, &k) == FROB_OK);
    CHECK(k == -1);
    uint64_t h = 0;
    unsigned w = 0;
    CHECK(frob_class_number(-23, &h, &w) == FROB_OK);
    CHECK(h == 3);
    CHECK(w == 1);
    uint64_t h12 = 0;
    CHECK(frob_hurwitz12(3, &h12) == FROB_OK);
    CHECK(h12 == 4);
    CHECK(frob_hurwitz12(4, &h12) == FROB_OK);
    CHECK(h12 == 6);
    uint64_t lhs, num, den;
    int holds = 0;
    CHECK(frob_deuring_check(7, 1, &lhs, &num, &den, &holds) == FROB_OK);
    CHECK(holds == 1);
    CHECK(lhs * den == num);
    // trace 1 at p = 7: (p-1)/2 H(27) with H(27) = h(-27) + h(-3)/3 = 4/3
    CHECK(lhs == 4);
}

TEST_CASE("Hurwitz table handle") {
    frob_htable* t = nullptr;
    REQUIRE(frob_htable_build(1000, &t) == FROB_OK);
    CHECK(frob_htable_bound(t) == 1000);
    uint64_t v = 0;
    CHECK(frob_htable_value12(t, 23, &v) == FROB_OK);
    CHECK(v == 36);
    CHECK(frob_htable_value12(t, 2000, &v) == FROB_E_CACHE);
    frob_htable_free(t);
    auto path = (std::filesystem::temp_directory_path() / "frobstat_capi_h.cache").string();
    std::filesystem::remove(path);
    REQUIRE(frob_htable_load_or_build(path.c_str(), 500, &t) == FROB_OK);
    frob_htable_free(t);
    CHECK(std::filesystem::exists(path));
    REQUIRE(frob_htable_load_or_build(path.c_str(), 400, &t) == FROB_OK);
    CHECK(frob_htable_bound(t) >= 400);
    frob_htable_free(t);
    std::filesystem::remove(path);
}

TEST_CASE("families, argument sets and counting") {
    frob_family* f = nullptr;
    REQUIRE(frob_family_parse("f=0;g=Z", &f) == FROB_OK);
    CHECK(std::string(frob_family_str(f)).size() > 0);
    frob_argset* s = nullptr;
    REQUIRE(frob_argset_parse("integers:10", &s) == FROB_OK);
    CHECK(frob_argset_cardinality(s) == 10);
    frob_sequence* a = nullptr;
    REQUIRE(frob_sequence_make(FROB_SEQ_CONSTANT, 0, &a) == FROB_OK);
    CHECK(frob_sequence_kind(a) == FROB_SEQ_CONSTANT);
    // y^2 = x^3 + t has trace 0 at every p = 2 mod 3
    uint64_t xs[] = {50, 100};
    frob_count_row rows[2];
    frob_count_opts o{2, 3, 0};
    REQUIRE(frob_avg_single(s, f, a, xs, 2, o, rows) == FROB_OK);
    // primes 5 <= p <= 50 with p = 2 mod 3: 5 11 17 23 29 41 47 -> 7 primes, t = 1..10 nonsingular unless p | t
    CHECK(rows[0].total == 7 * 10 - 2);  // p = 5 divides 5 and 10
    CHECK(rows[0].excluded_cm == rows[0].total);
    CHECK(rows[1].total > rows[0].total);
    uint64_t bad[] = {100, 50};
    CHECK(frob_avg_single(s, f, a, bad, 2, o, rows) != FROB_OK);
    o.exclude_cm = 1;
    REQUIRE(frob_avg_single(s, f, a, xs, 2, o, rows) == FROB_OK);
    CHECK(rows[0].total == 0);
    REQUIRE(frob_avg_pair(s, f, f, a, a, xs, 1, frob_count_opts{2, 3, 0}, 1, rows) == FROB_OK);
    CHECK(rows[0].total == 68);
    frob_sequence_free(a);
    frob_argset_free(s);
    frob_family_free(f);
}

TEST_CASE("exponential family defect") {
    frob_expfam* e = nullptr;
    REQUIRE(frob_expfam_make("1", 1, 1, 2, &e) == FROB_OK);
    frob_isolam r;
    REQUIRE(frob_isolam_defect(e, 1, 11, &r) == FROB_OK);
    CHECK(std::fabs(r.defect) <= 6 * 11);
    CHECK(frob_isolam_defect(e, 1, 3, &r) == FROB_E_BAD_PRIME);
    frob_expfam_free(e);
}

TEST_CASE("permutation tests") {
    int ok = 0;
    CHECK(frob_is_permutation_poly("Z^5+5Z^3+5Z", 7, &ok) == FROB_OK);
    CHECK(ok == 1);
    CHECK(frob_is_permutation_poly("Z^5+5Z^3+5Z", 11, &ok) == FROB_OK);
    CHECK(ok == 0);
    CHECK(frob_is_permutation_poly("Z^3", 5, &ok) == FROB_OK);
    CHECK(ok == 1);
}

TEST_CASE("constants") {
    int64_t c1 = 0, c2 = 0;
    CHECK(frob_char_sum_local(3, 1, 2, 0, 0, 1, 1, 1, &c1) == FROB_OK);
    CHECK(frob_char_sum_direct(1, 1, 3, 9, 1, 1, 1, &c2) == FROB_OK);
    CHECK(c1 == c2);
    CHECK(frob_char_sum_direct(1, 1, 3, 9, 2, 1, 1, &c2) == FROB_E_DOMAIN);
    frob_local_factor lf;
    REQUIRE(frob_local_factor_eval(FROB_TWO_CURVES, 2, 1, 1, 1, &lf) == FROB_OK);
    CHECK(std::string(lf.lambda) == "4/9");
    REQUIRE(frob_local_factor_eval(FROB_ONE_CURVE, 2, 1, 1, 1, &lf) == FROB_OK);
    CHECK(std::string(lf.lambda) == "2/3");
    REQUIRE(frob_local_factor_eval(FROB_ONE_CURVE, 5, 5, 1, 1, &lf) == FROB_OK);
    CHECK(std::string(lf.lambda) == "25/24");
    char buf[160];
    REQUIRE(frob_local_factor_series(FROB_ONE_CURVE, 5, 5, 1, 1, 0, buf, sizeof buf) == FROB_OK);
    CHECK(std::string(buf) == "1");
    frob_euler eu;
    REQUIRE(frob_euler_product(FROB_ONE_CURVE, 1, 1, 1, 1000, &eu) == FROB_OK);
    CHECK(eu.p_max == 1000);
    CHECK(eu.constant_value > 0);
    CHECK(std::fabs(std::stod(eu.constant) - eu.constant_value) < 1e-12);
    double ph = 0;
    CHECK(frob_pi_half(1e6, &ph) == FROB_OK);
    CHECK(std::fabs(ph - 0.5 * (std::expint(0.5 * std::log(1e6)) - std::expint(0.5 * std::log(2.0)))) < 1e-6);
    double v = 0, tail = 0;
    CHECK(frob_k_direct(1, 1, 1, 1, 1, 1, 1, &v, &tail) == FROB_OK);
    CHECK(v == 1.0);
}

TEST_CASE("hurwitz averages through a table handle") {
    frob_sequence* a = nullptr;
    REQUIRE(frob_sequence_make(FROB_SEQ_CONSTANT, 1, &a) == FROB_OK);
    frob_htable* t = nullptr;
    REQUIRE(frob_htable_build(4000, &t) == FROB_OK);
    frob_hurwitz_avg with, without;
    REQUIRE(frob_hurwitz_avg_eval(a, 1000, 1, 1, 1, t, &with) == FROB_OK);
    REQUIRE(frob_hurwitz_avg_eval(a, 1000, 1, 1, 1, nullptr, &without) == FROB_OK);
    CHECK(with.value == without.value);
    CHECK(with.primes_used == 166);
    CHECK(frob_hurwitz_avg_eval(a, 2000, 1, 1, 1, t, &with) == FROB_E_CACHE);
    frob_htable_free(t);
    frob_sequence_free(a);
}

TEST_CASE("CLT moments and helpers") {
    int64_t h = 0;
    CHECK(frob_h_coeff(2, 0, &h) == FROB_OK);
    CHECK(h == 1);
    CHECK(frob_h_coeff(2, 1, &h) == FROB_OK);
    CHECK(h == 0);
    CHECK(frob_h_coeff(2, 3, &h) == FROB_E_RANGE);
    CHECK(frob_gaussian_moment(4) == 3);
    double s = 0;
    CHECK(frob_s_avg(7, &s) == FROB_OK);
    CHECK(s == 0.0);
    frob_coeff_map id{FROB_MAP_IDENTITY, nullptr, 1, 0, 1};
    frob_prime_set all{FROB_PRIMES_ALL, 0, 1, nullptr, 0};
    double V[2], W[2];
    frob_moment_info info;
    REQUIRE(frob_clt_moments(id, id, 3, 3, all, 80, 2, 0, 1e9, V, &info) == FROB_OK);
    CHECK(info.curves == 46);  // (0,0) and (-3,+-2) are singular
    REQUIRE(frob_clt_moments(id, id, 3, 3, all, 80, 2, 1, 1e9, W, &info) == FROB_OK);
    CHECK(std::fabs(V[0] - W[0]) < 1e-12);
    CHECK(std::fabs(V[1] - W[1]) < 1e-12);
    CHECK(frob_clt_moments(id, id, 3, 3, all, 80, 3, 1, 1e9, W, &info) == FROB_E_DOMAIN);
    uint64_t list[] = {5, 7};
    frob_prime_set two{FROB_PRIMES_LIST, 0, 1, list, 2};
    REQUIRE(frob_clt_moments(id, id, 1, 1, two, 10, 1, 0, 1e9, V, &info) == FROB_OK);
    CHECK(info.primes == 2);
    frob_coeff_map poly{FROB_MAP_POLY, "Z^5+5Z^3+5Z", 1, 0, 1};
    frob_prime_set cong{FROB_PRIMES_CONGRUENCE, 2, 5, nullptr, 0};
    CHECK(frob_clt_moments(poly, poly, 2, 2, cong, 100, 1, 0, 1e9, V, &info) == FROB_OK);

    auto path = (std::filesystem::temp_directory_path() / "frobstat_capi_eigen.csv").string();
    {
        std::ofstream o(path);
        o << "form,p,lambda\na,5,1\nb,5,-0.5\n";
    }
    frob_eigen* t = nullptr;
    REQUIRE(frob_eigen_load(path.c_str(), &t) == FROB_OK);
    CHECK(frob_eigen_forms(t) == 2);
    CHECK(frob_eigen_moments(t, nullptr, 0, 6, 1, V, &info) == FROB_E_MISSING);  // 2 and 3 are absent
    uint64_t five[] = {5};
    REQUIRE(frob_eigen_moments(t, five, 1, 6, 1, V, &info) == FROB_OK);
    CHECK(V[0] == -0.5);
    frob_eigen_free(t);
    std::filesystem::remove(path);
}

TEST_CASE("selftest entry point") {
    uint64_t checks = 0, failures = 0;
    char first[256];
    REQUIRE(frob_selftest("trace", &checks, &failures, first, sizeof first) == FROB_OK);
    CHECK(checks > 0);
    CHECK(failures == 0);
    CHECK(frob_selftest("nonsense", &checks, &failures, first, sizeof first) == FROB_E_DOMAIN);
}

TEST_CASE("thread count setting") {
    frob_set_threads(3);
    CHECK(frob_threads() == 3);
    frob_set_threads(0);
    CHECK(frob_threads() >= 1);
}
