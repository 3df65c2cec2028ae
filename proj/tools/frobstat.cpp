// frobstat command-line driver; talks to the library only through frobstat.h
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frobstat/frobstat.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_mismatch = 3;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct lib_error : std::runtime_error {
    frob_status code;
    lib_error(frob_status c, const std::string& m) : std::runtime_error(m), code(c) {}
};

void check(frob_status s) {
    if (s != FROB_OK) throw lib_error(s, frob_last_error());
}

template <class T, void (*F)(T*)>
struct handle {
    T* p = nullptr;
    handle() = default;
    handle(const handle&) = delete;
    handle& operator=(const handle&) = delete;
    ~handle() { F(p); }
    T** out() { return &p; }
    T* get() const { return p; }
};

using family_h = handle<frob_family, frob_family_free>;
using argset_h = handle<frob_argset, frob_argset_free>;
using sequence_h = handle<frob_sequence, frob_sequence_free>;
using expfam_h = handle<frob_expfam, frob_expfam_free>;
using htable_h = handle<frob_htable, frob_htable_free>;
using eigen_h = handle<frob_eigen, frob_eigen_free>;

// accepts 1000, 1e6 and 10^6
uint64_t parse_bound(const std::string& s) {
    auto bad = [&] { return config_error("not a nonnegative integer bound: " + s); };
    if (s.empty()) throw bad();
    auto caret = s.find('^');
    try {
        if (caret != std::string::npos) {
            uint64_t b = std::stoull(s.substr(0, caret)), e = std::stoull(s.substr(caret + 1));
            uint64_t v = 1;
            for (uint64_t i = 0; i < e; ++i) {
                if (v > UINT64_MAX / (b ? b : 1)) throw bad();
                v *= b;
            }
            return v;
        }
        if (s.find_first_of("eE.") != std::string::npos) {
            double d = std::stod(s);
            if (!(d >= 0) || d != std::floor(d) || d > 1.8e19) throw bad();
            return (uint64_t)d;
        }
        std::size_t pos;
        uint64_t v = std::stoull(s, &pos);
        if (pos != s.size() || s[0] == '-') throw bad();
        return v;
    } catch (const std::logic_error&) {
        throw bad();
    }
}

std::vector<uint64_t> parse_grid(const std::vector<std::string>& items) {
    std::vector<uint64_t> xs;
    for (const auto& it : items) xs.push_back(parse_bound(it));
    if (xs.empty()) throw config_error("field x: empty grid");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] <= xs[i - 1]) throw config_error("field x: grid must be strictly increasing");
    return xs;
}

// ---------------------------------------------------------------- output

struct emitter {
    std::string format;  // csv | json
    bool explicit_format = false;

    void rows(const json& arr) const {
        if (format == "json") {
            std::cout << arr.dump(2) << "\n";
            return;
        }
        if (arr.empty()) return;
        bool first = true;
        for (auto it = arr[0].begin(); it != arr[0].end(); ++it) {
            std::cout << (first ? "" : ",") << it.key();
            first = false;
        }
        std::cout << "\n";
        for (const auto& r : arr) {
            first = true;
            for (auto it = r.begin(); it != r.end(); ++it) {
                std::cout << (first ? "" : ",") << cell(it.value());
                first = false;
            }
            std::cout << "\n";
        }
    }

    void record(const json& obj) const {
        if (format == "json") {
            std::cout << obj.dump(2) << "\n";
            return;
        }
        std::cout << "field,value\n";
        flatten(obj, "");
    }

private:
    static std::string cell(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_null()) return "";
        if (v.is_array()) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + cell(v[i]);
            return s;
        }
        return v.dump();
    }
    void flatten(const json& obj, const std::string& prefix) const {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            std::string k = prefix.empty() ? it.key() : prefix + "." + it.key();
            if (it.value().is_object())
                flatten(it.value(), k);
            else
                std::cout << k << "," << cell(it.value()) << "\n";
        }
    }
};

// ---------------------------------------------------------------- helpers

std::string cache_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* d = std::getenv("FROBSTAT_CACHE_DIR"); d && *d) return std::string(d) + "/hurwitz.cache";
    return "";
}

void make_sequence(const std::string& spec, int64_t tau, bool tau_set, sequence_h& out) {
    if (spec.empty() || spec == "constant") {
        if (!tau_set) throw config_error("field tau: required for a constant trace sequence");
        check(frob_sequence_make(FROB_SEQ_CONSTANT, tau, out.out()));
    } else if (spec == "extremal-plus") {
        check(frob_sequence_make(FROB_SEQ_EXTREMAL_PLUS, 0, out.out()));
    } else if (spec == "extremal-minus") {
        check(frob_sequence_make(FROB_SEQ_EXTREMAL_MINUS, 0, out.out()));
    } else if (spec == "extremal-both") {
        check(frob_sequence_make(FROB_SEQ_EXTREMAL_BOTH, 0, out.out()));
    } else if (spec.rfind("csv:", 0) == 0) {
        check(frob_sequence_load(spec.substr(4).c_str(), out.out()));
    } else {
        throw config_error("field sequence: expected constant, extremal-plus, extremal-minus, extremal-both or csv:PATH");
    }
}

double one_curve_constant(int64_t tau, uint64_t ups, uint64_t om) {
    frob_euler e;
    // the constant is only defined for odd tau; leave the prediction blank otherwise
    if (frob_euler_product(FROB_ONE_CURVE, tau, (int64_t)ups, om, 10000, &e) != FROB_OK) return NAN;
    return e.constant_value;
}

double two_curve_constant(int64_t tau, uint64_t ups, uint64_t om) {
    frob_euler e;
    // the constant is only defined for odd tau; leave the prediction blank otherwise
    if (frob_euler_product(FROB_TWO_CURVES, tau, (int64_t)ups, om, 10000, &e) != FROB_OK) return NAN;
    return e.constant_value;
}

double extremal_main(double x) { return 8.0 / (3.0 * std::numbers::pi) * std::pow(x, 0.25) / std::log(x); }

double pi_half_of(double x) {
    double v;
    check(frob_pi_half(x, &v));
    return v;
}

json count_rows(const std::vector<frob_count_row>& rows, const std::function<double(double)>& predicted) {
    json arr = json::array();
    for (const auto& r : rows) {
        double pred = predicted ? predicted((double)r.x) : NAN;
        json row;
        row["x"] = r.x;
        row["total"] = r.total;
        row["excludedCM"] = r.excluded_cm;
        row["predictedMainTerm"] = std::isnan(pred) ? json() : json(pred);
        row["ratio"] = (std::isnan(pred) || pred == 0) ? json() : json((double)r.total / pred);
        arr.push_back(row);
    }
    return arr;
}

frob_coeff_map parse_map(const std::string& s, std::string& storage, const char* field) {
    frob_coeff_map m{FROB_MAP_IDENTITY, nullptr, 1, 0, 1};
    if (s == "identity") return m;
    if (s.rfind("poly:", 0) == 0) {
        storage = s.substr(5);
        m.kind = FROB_MAP_POLY;
        m.poly = storage.c_str();
        return m;
    }
    if (s.rfind("exp:", 0) == 0) {
        std::stringstream ss(s.substr(4));
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw config_error(std::string("field ") + field + ": expected exp:ALPHA,BETA,GAMMA");
        try {
            m.kind = FROB_MAP_EXP;
            m.alpha = std::stoll(a);
            m.beta = std::stoll(b);
            m.gamma = std::stoll(c);
        } catch (const std::logic_error&) {
            throw config_error(std::string("field ") + field + ": expected integers in exp:ALPHA,BETA,GAMMA");
        }
        return m;
    }
    throw config_error(std::string("field ") + field + ": expected identity, poly:EXPR or exp:ALPHA,BETA,GAMMA");
}

frob_prime_set parse_primes(const std::string& s, std::vector<uint64_t>& storage) {
    frob_prime_set P{FROB_PRIMES_ALL, 0, 1, nullptr, 0};
    if (s == "all") return P;
    if (s.rfind("cong:", 0) == 0) {
        auto rest = s.substr(5);
        auto c = rest.find(':');
        if (c == std::string::npos) throw config_error("field primes: expected cong:UPSILON:OMEGA");
        P.kind = FROB_PRIMES_CONGRUENCE;
        P.ups = parse_bound(rest.substr(0, c));
        P.om = parse_bound(rest.substr(c + 1));
        return P;
    }
    if (s.rfind("list:", 0) == 0) {
        std::stringstream ss(s.substr(5));
        std::string item;
        while (std::getline(ss, item, ',')) storage.push_back(parse_bound(item));
        P.kind = FROB_PRIMES_LIST;
        P.primes = storage.data();
        P.nprimes = storage.size();
        return P;
    }
    throw config_error("field primes: expected all, cong:UPSILON:OMEGA or list:P1,P2,...");
}

// ---------------------------------------------------------------- config files

// "key = value" lines, '#' comments, optional quotes; "command" picks the subcommand
std::vector<std::string> config_to_args(const std::string& path, CLI::App& app, std::string& command) {
    std::ifstream in(path);
    if (!in) throw config_error("config " + path + ": cannot open");
    std::vector<std::pair<std::string, std::string>> kv;
    std::vector<int> lines;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos && line.find('"') == std::string::npos) line = line.substr(0, hash);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config " + path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
        if (k.empty()) throw config_error("config " + path + ":" + std::to_string(lineno) + ": empty key");
        if (k == "command") {
            if (!command.empty() && command != v)
                throw config_error("config " + path + ":" + std::to_string(lineno) + ": command " + v +
                                   " conflicts with " + command);
            command = v;
            continue;
        }
        kv.push_back({k, v});
        lines.push_back(lineno);
    }
    if (command.empty()) throw config_error("config " + path + ": missing field command");
    CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(command);
    } catch (const CLI::OptionNotFound&) {
        throw config_error("config " + path + ": unknown command " + command);
    }
    std::vector<std::string> args{command};
    for (std::size_t i = 0; i < kv.size(); ++i) {
        const auto& [k, v] = kv[i];
        std::string opt = "--" + k;
        CLI::Option* o = sub->get_option_no_throw(opt);
        if (!o) o = app.get_option_no_throw(opt);
        if (!o)
            throw config_error("config " + path + ":" + std::to_string(lines[i]) + ": unknown field " + k + " for " + command);
        if (o->get_expected_min() == 0) {
            if (v == "true" || v == "1") args.push_back(opt);
            else if (v != "false" && v != "0")
                throw config_error("config " + path + ":" + std::to_string(lines[i]) + ": field " + k + " expects true or false");
        } else {
            args.push_back(opt);
            args.push_back(v);
        }
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frobstat: Frobenius trace statistics over families of elliptic curves"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(0, 1);
    app.fallthrough();
    bool selftest = false;
    std::string config_path, format, hurwitz_cache, manifest_path;
    unsigned threads = 0;
    app.add_flag("--selftest", selftest, "run the oracle comparisons for the command's module");
    app.add_option("--config", config_path, "key = value file; 'command' names the subcommand");
    app.add_option("--threads", threads, "worker threads, 0 = all cores");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--hurwitz-cache", hurwitz_cache, "Hurwitz table cache file");
    app.add_option("--manifest", manifest_path, "write a run manifest (config echo, version, wall time)");

    // shared option storage
    std::string argset, family, family1, family2, sequence, sequence1, sequence2, poly, den, kind = "one";
    std::vector<std::string> xs_raw;
    int64_t tau = 0, tau1 = 0, tau2 = 0, a = 0, b = 0;
    uint64_t p = 0, ups = 1, om = 1, pmax = 0, f = 1, g = 1, m = 1, n = 1;
    std::vector<std::string> ns_raw, ps_raw, defect_raw;
    unsigned series = 0, r = 2, hm = 1, hn = 1;
    int moment = 1;
    bool exclude_cm = false, diagonal = false, collapsed = false;
    std::string hpoly = "1", phi = "identity", psi = "identity", primes = "all", table;
    int64_t A = 20, B = 20, base = 2;
    std::string local;
    uint64_t K_F = 8, K_G = 8, K_M = 8, K_N = 8;

    auto* c_trace = app.add_subcommand("trace", "trace of Frobenius of y^2 = x^3 + a x + b at p");
    c_trace->add_option("--a", a)->required();
    c_trace->add_option("--b", b)->required();
    c_trace->add_option("--p", p)->required();

    auto* c_hurwitz = app.add_subcommand("hurwitz", "Hurwitz class numbers H(n)");
    c_hurwitz->add_option("--n", ns_raw, "values, comma separated")->required()->delimiter(',');

    auto* c_deuring = app.add_subcommand("deuring-check", "exhaustive trace counts against (p-1)/2 H(4p - tau^2)");
    c_deuring->add_option("--pmax", pmax)->required();

    auto add_counting = [&](CLI::App* c) {
        c->add_option("--argset", argset, "integers:T, farey:T, range:LO:HI, geometric:BASE:T, csv:PATH, A+B")->required();
        c->add_option("--x", xs_raw, "strictly increasing bounds")->required()->delimiter(',');
        c->add_option("--ups", ups, "prime congruence residue");
        c->add_option("--omega", om, "prime congruence modulus");
    };
    auto* c_avg = app.add_subcommand("avg-lt", "average Lang-Trotter counts over a one-parameter family");
    add_counting(c_avg);
    c_avg->add_option("--family", family, "f=<poly>;g=<poly>")->required();
    c_avg->add_option("--tau", tau);
    c_avg->add_option("--sequence", sequence, "constant, extremal-plus, extremal-minus, extremal-both, csv:PATH");
    c_avg->add_flag("--exclude-cm", exclude_cm);

    auto* c_pair = app.add_subcommand("avg-lt-pair", "pair counts over two families sharing one argument set");
    add_counting(c_pair);
    c_pair->add_option("--family1", family1)->required();
    c_pair->add_option("--family2", family2)->required();
    c_pair->add_option("--tau1", tau1);
    c_pair->add_option("--tau2", tau2);
    c_pair->add_option("--sequence1", sequence1);
    c_pair->add_option("--sequence2", sequence2);
    c_pair->add_flag("--diagonal", diagonal, "restrict to t1 = t2 (exploratory)");

    auto* c_exp = app.add_subcommand("exp-count", "counts over the exponential family j = Z b^Z");
    c_exp->set_help_flag("--help", "print this help message and exit");
    add_counting(c_exp);
    c_exp->add_option("--h", hpoly, "polynomial h(Z)");
    c_exp->add_option("--m", hm);
    c_exp->add_option("--n", hn);
    c_exp->add_option("--b", base);
    c_exp->add_option("--tau", tau);
    c_exp->add_option("--sequence", sequence);
    c_exp->add_option("--defect-primes", defect_raw, "report the residue-count defect at these primes")->delimiter(',');

    auto* c_perm = app.add_subcommand("perm-check", "permutation test for a polynomial or rational map mod p");
    c_perm->add_option("--poly", poly)->required();
    c_perm->add_option("--den", den, "denominator polynomial for a rational map");
    c_perm->add_option("--p", ps_raw, "primes, comma separated")->delimiter(',');
    c_perm->add_option("--pmax", pmax, "all primes 5 <= p <= pmax");

    auto* c_cs = app.add_subcommand("char-sum", "character sum c_{f,g}(m, n)");
    c_cs->add_option("--f", f);
    c_cs->add_option("--g", g);
    c_cs->add_option("--m", m);
    c_cs->add_option("--n", n);
    c_cs->add_option("--tau", tau)->required();
    c_cs->add_option("--ups", ups);
    c_cs->add_option("--omega", om);
    c_cs->add_option("--local", local, "P,I,J,K,L: closed form at prime powers");

    auto* c_lf = app.add_subcommand("local-factor", "local Euler factor Lambda(p)");
    c_lf->add_option("--kind", kind)->check(CLI::IsMember({"one", "two"}));
    c_lf->add_option("--p", p)->required();
    c_lf->add_option("--tau", tau)->required();
    c_lf->add_option("--ups", ups);
    c_lf->add_option("--omega", om);
    c_lf->add_option("--series", series, "also sum the local series to this exponent");

    auto* c_const = app.add_subcommand("constant", "Euler-product constant with tail envelope");
    c_const->add_option("--kind", kind)->check(CLI::IsMember({"one", "two"}));
    c_const->add_option("--tau", tau)->required();
    c_const->add_option("--ups", ups);
    c_const->add_option("--omega", om);
    c_const->add_option("--pmax", pmax)->required();
    c_const->add_option("--direct", local, "F,G,M,N: also report the truncated direct series");

    auto* c_havg = app.add_subcommand("hurwitz-avg", "sum of H(4p - t_p^2)/p against its main term");
    c_havg->add_option("--tau", tau);
    c_havg->add_option("--sequence", sequence);
    c_havg->add_option("--x", xs_raw)->required()->delimiter(',');
    c_havg->add_option("--ups", ups);
    c_havg->add_option("--omega", om);
    c_havg->add_option("--moment", moment)->check(CLI::IsMember({1, 2}));

    auto* c_pih = app.add_subcommand("pi-half", "integral of dt / (2 sqrt(t) log t) from 2 to x");
    c_pih->add_option("--x", xs_raw)->required()->delimiter(',');

    auto* c_clt = app.add_subcommand("clt-moments", "moments of the normalized pair statistic over a curve box");
    c_clt->add_option("--phi", phi, "identity, poly:EXPR, exp:ALPHA,BETA,GAMMA");
    c_clt->add_option("--psi", psi);
    c_clt->add_option("--A", A);
    c_clt->add_option("--B", B);
    c_clt->add_option("--x", xs_raw)->required()->delimiter(',');
    c_clt->add_option("--r", r, "highest moment");
    c_clt->add_option("--primes", primes, "all, cong:UPSILON:OMEGA, list:P1,P2,...");
    c_clt->add_flag("--collapsed", collapsed, "power-sum path, r <= 2");

    auto* c_eig = app.add_subcommand("clt-eigen", "moments from a Hecke eigenvalue table");
    c_eig->add_option("--table", table, "CSV form_label,p,lambda_normalized")->required();
    c_eig->add_option("--x", xs_raw)->required()->delimiter(',');
    c_eig->add_option("--r", r);
    c_eig->add_option("--primes", primes, "all or list:P1,P2,...");

    // selftest needs no command options, so relax requirements in that mode
    bool want_selftest = false;
    std::vector<std::string> raw(argv + 1, argv + argc);
    for (const auto& s : raw)
        if (s == "--selftest") want_selftest = true;
    if (want_selftest)
        for (auto* sub : app.get_subcommands([](CLI::App*) { return true; }))
            for (auto* o : sub->get_options()) o->required(false);

    auto started = std::chrono::steady_clock::now();
    try {
        // the config path has to be known before the real parse
        std::string cmd_on_line;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == "--config" && i + 1 < raw.size()) config_path = raw[i + 1];
            else if (raw[i].rfind("--config=", 0) == 0) config_path = raw[i].substr(9);
        }
        std::vector<std::string> args = raw;
        if (!config_path.empty()) {
            for (const auto& s : raw)
                if (s.rfind("--", 0) != 0) {
                    try {
                        (void)app.get_subcommand(s);
                        cmd_on_line = s;
                        break;
                    } catch (const CLI::OptionNotFound&) {
                    }
                }
            std::string command = cmd_on_line;
            auto extra = config_to_args(config_path, app, command);
            // global flags from the command line first, then the config's command and fields
            args.clear();
            for (std::size_t i = 0; i < raw.size(); ++i) {
                if (raw[i] == cmd_on_line) continue;
                args.push_back(raw[i]);
            }
            args.insert(args.end(), extra.begin(), extra.end());
        }
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }

    frob_set_threads(threads);
    CLI::App* cmd = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
    std::string name = cmd ? cmd->get_name() : "";

    if (selftest) {
        std::vector<std::string> cmds;
        if (cmd) cmds.push_back(name);
        else cmds = {"trace", "hurwitz", "perm-check", "avg-lt", "constant", "clt-moments"};
        bool ok = true;
        for (const auto& c : cmds) {
            uint64_t checks = 0, failures = 0;
            char first[512] = {0};
            if (frob_selftest(c.c_str(), &checks, &failures, first, sizeof first) != FROB_OK) {
                std::cerr << "selftest " << c << ": " << frob_last_error() << "\n";
                return exit_mismatch;
            }
            std::cout << "selftest " << c << ": " << checks << " checks, " << failures << " mismatches"
                      << (failures ? std::string(" (first: ") + first + ")" : std::string()) << "\n";
            if (failures) ok = false;
        }
        return ok ? exit_ok : exit_mismatch;
    }
    if (!cmd) {
        std::cerr << app.help();
        return exit_config;
    }

    bool row_command = name == "avg-lt" || name == "avg-lt-pair" || name == "exp-count" || name == "hurwitz" ||
                       name == "hurwitz-avg" || name == "pi-half" || name == "perm-check" || name == "trace" ||
                       name == "deuring-check";
    emitter out{format.empty() ? (row_command ? "csv" : "json") : format, !format.empty()};

    try {
        if (name == "trace") {
            int64_t t;
            check(frob_trace(a, b, p, &t));
            out.rows(json::array({json{{"a", a}, {"b", b}, {"p", p}, {"trace", t}}}));
        } else if (name == "hurwitz") {
            json arr = json::array();
            for (const auto& s : ns_raw) {
                uint64_t v = parse_bound(s), h12;
                check(frob_hurwitz12(v, &h12));
                uint64_t gd = std::gcd(h12, (uint64_t)12);
                std::string H = gd == 12 || h12 == 0 ? std::to_string(h12 / 12)
                                                      : std::to_string(h12 / gd) + "/" + std::to_string(12 / gd);
                arr.push_back(json{{"n", v}, {"H12", h12}, {"H", H}});
            }
            out.rows(arr);
        } else if (name == "deuring-check") {
            uint64_t checked = 0;
            json first;
            for (uint64_t q = 5; q <= pmax && first.is_null(); ++q) {
                bool prime = true;
                for (uint64_t d = 2; d * d <= q; ++d)
                    if (q % d == 0) prime = false;
                if (!prime) continue;
                int64_t lim = (int64_t)std::floor(2 * std::sqrt((double)q));
                while (lim * lim >= 4 * (int64_t)q) --lim;
                for (int64_t t = -lim; t <= lim; ++t) {
                    if (t == 0 || t % (int64_t)q == 0) continue;
                    uint64_t lhs, rn, rd;
                    int holds;
                    check(frob_deuring_check(q, t, &lhs, &rn, &rd, &holds));
                    ++checked;
                    if (!holds) {
                        first = json{{"p", q}, {"tau", t}, {"count", lhs},
                                     {"rhs", std::to_string(rn) + (rd == 1 ? "" : "/" + std::to_string(rd))}};
                        break;
                    }
                }
            }
            if (out.format == "json") {
                json o{{"pmax", pmax}, {"checked", checked}, {"holds", first.is_null()}, {"counterexample", first}};
                out.record(o);
            } else if (first.is_null()) {
                std::cout << "all identities hold (" << checked << " (p, tau) pairs, 5 <= p <= " << pmax << ")\n";
            } else {
                std::cout << "counterexample: p=" << first["p"].dump() << " tau=" << first["tau"].dump()
                          << " count=" << first["count"].dump() << " rhs=" << first["rhs"].get<std::string>() << "\n";
                return exit_mismatch;
            }
        } else if (name == "avg-lt" || name == "exp-count") {
            auto xs = parse_grid(xs_raw);
            argset_h S;
            check(frob_argset_parse(argset.c_str(), S.out()));
            sequence_h seq;
            make_sequence(sequence, tau, cmd->count("--tau") > 0, seq);
            frob_count_opts o{ups, om, exclude_cm ? 1 : 0};
            std::vector<frob_count_row> rows(xs.size());
            if (name == "exp-count" && !defect_raw.empty()) {
                expfam_h e;
                check(frob_expfam_make(hpoly.c_str(), hm, hn, base, e.out()));
                json arr = json::array();
                for (const auto& s : defect_raw) {
                    frob_isolam d;
                    check(frob_isolam_defect(e.get(), tau, parse_bound(s), &d));
                    arr.push_back(json{{"p", parse_bound(s)}, {"count", d.count}, {"mainTerm", (double)d.main12 / 12.0},
                                       {"defect", d.defect}, {"defectOverP", d.defect_over_p}});
                }
                out.rows(arr);
                return exit_ok;
            }
            if (name == "avg-lt") {
                family_h fam;
                check(frob_family_parse(family.c_str(), fam.out()));
                check(frob_avg_single(S.get(), fam.get(), seq.get(), xs.data(), xs.size(), o, rows.data()));
            } else {
                expfam_h e;
                check(frob_expfam_make(hpoly.c_str(), hm, hn, base, e.out()));
                check(frob_exp_count(S.get(), e.get(), seq.get(), xs.data(), xs.size(), o, rows.data()));
            }
            double card = (double)frob_argset_cardinality(S.get());
            std::function<double(double)> pred;
            int k = frob_sequence_kind(seq.get());
            if (k == FROB_SEQ_CONSTANT) {
                double C = one_curve_constant(tau, ups, om);
                pred = [=](double x) { return card * C * pi_half_of(x); };
            } else if (k == FROB_SEQ_EXTREMAL_PLUS || k == FROB_SEQ_EXTREMAL_MINUS) {
                pred = [=](double x) { return card * extremal_main(x); };
            } else if (k == FROB_SEQ_EXTREMAL_BOTH) {
                pred = [=](double x) { return 2 * card * extremal_main(x); };
            }
            out.rows(count_rows(rows, pred));
        } else if (name == "avg-lt-pair") {
            auto xs = parse_grid(xs_raw);
            argset_h S;
            check(frob_argset_parse(argset.c_str(), S.out()));
            family_h f1, f2;
            check(frob_family_parse(family1.c_str(), f1.out()));
            check(frob_family_parse(family2.c_str(), f2.out()));
            sequence_h s1, s2;
            make_sequence(sequence1, tau1, cmd->count("--tau1") > 0, s1);
            make_sequence(sequence2, tau2, cmd->count("--tau2") > 0, s2);
            frob_count_opts o{ups, om, 0};
            std::vector<frob_count_row> rows(xs.size());
            check(frob_avg_pair(S.get(), f1.get(), f2.get(), s1.get(), s2.get(), xs.data(), xs.size(), o, diagonal,
                                rows.data()));
            std::function<double(double)> pred;
            if (!diagonal && frob_sequence_kind(s1.get()) == FROB_SEQ_CONSTANT &&
                frob_sequence_kind(s2.get()) == FROB_SEQ_CONSTANT && tau1 == tau2) {
                double card = (double)frob_argset_cardinality(S.get());
                double C = two_curve_constant(tau1, ups, om);
                pred = [=](double x) { return card * card * C * std::log(std::log(x)); };
            }
            out.rows(count_rows(rows, pred));
        } else if (name == "perm-check") {
            std::vector<uint64_t> ps;
            for (const auto& s : ps_raw) ps.push_back(parse_bound(s));
            for (uint64_t q = 5; q <= pmax; ++q) {
                bool prime = true;
                for (uint64_t d = 2; d * d <= q; ++d)
                    if (q % d == 0) prime = false;
                if (prime) ps.push_back(q);
            }
            if (ps.empty()) throw config_error("field p: give --p or --pmax");
            json arr = json::array();
            for (uint64_t q : ps) {
                int res;
                if (den.empty()) check(frob_is_permutation_poly(poly.c_str(), q, &res));
                else check(frob_is_near_permutation(poly.c_str(), den.c_str(), q, &res));
                arr.push_back(json{{"p", q}, {"permutation", res != 0}});
            }
            out.rows(arr);
        } else if (name == "char-sum") {
            int64_t v;
            json o;
            if (!local.empty()) {
                std::stringstream ss(local);
                std::string item;
                std::vector<uint64_t> e;
                while (std::getline(ss, item, ',')) e.push_back(parse_bound(item));
                if (e.size() != 5) throw config_error("field local: expected P,I,J,K,L");
                check(frob_char_sum_local(e[0], (unsigned)e[1], (unsigned)e[2], (unsigned)e[3], (unsigned)e[4], tau,
                                          (int64_t)ups, om, &v));
                o["inputs"] = json{{"p", e[0]}, {"i", e[1]}, {"j", e[2]}, {"k", e[3]}, {"l", e[4]},
                                   {"tau", tau}, {"ups", ups}, {"omega", om}};
                o["value"] = v;
                o["branch"] = "closed-form";
            } else {
                check(frob_char_sum_direct(f, g, m, n, tau, (int64_t)ups, om, &v));
                o["inputs"] = json{{"f", f}, {"g", g}, {"m", m}, {"n", n}, {"tau", tau}, {"ups", ups}, {"omega", om}};
                o["value"] = v;
                o["branch"] = "direct";
            }
            o["truncation"] = nullptr;
            o["tail"] = 0;
            out.record(o);
        } else if (name == "local-factor") {
            frob_curve_kind k = kind == "two" ? FROB_TWO_CURVES : FROB_ONE_CURVE;
            frob_local_factor lf;
            check(frob_local_factor_eval(k, p, tau, (int64_t)ups, om, &lf));
            json o;
            o["inputs"] = json{{"kind", kind}, {"p", p}, {"tau", tau}, {"ups", ups}, {"omega", om}};
            o["value"] = lf.lambda;
            o["approx"] = lf.value;
            o["branch"] = lf.branch;
            o["truncation"] = nullptr;
            o["tail"] = 0;
            if (series) {
                char buf[4096];
                check(frob_local_factor_series(k, p, tau, (int64_t)ups, om, series, buf, sizeof buf));
                o["series"] = json{{"maxExponent", series}, {"value", buf}};
            }
            out.record(o);
        } else if (name == "constant") {
            frob_curve_kind k = kind == "two" ? FROB_TWO_CURVES : FROB_ONE_CURVE;
            frob_euler e;
            check(frob_euler_product(k, tau, (int64_t)ups, om, pmax, &e));
            json o;
            o["inputs"] = json{{"kind", kind}, {"tau", tau}, {"ups", ups}, {"omega", om}, {"pmax", pmax}};
            o["value"] = e.constant_value;
            o["valueDigits"] = e.constant;
            o["partialProduct"] = e.partial_product;
            o["branch"] = nullptr;
            o["truncation"] = pmax;
            o["tail"] = e.constant_tail;
            o["logTail"] = e.tail_estimate;
            o["fittedConstant"] = e.fitted_constant;
            if (!local.empty()) {
                std::stringstream ss(local);
                std::string item;
                std::vector<uint64_t> t;
                while (std::getline(ss, item, ',')) t.push_back(parse_bound(item));
                if (t.size() != 4) throw config_error("field direct: expected F,G,M,N");
                double v, tl;
                check(frob_k_direct(tau, (int64_t)ups, om, t[0], t[1], t[2], t[3], &v, &tl));
                o["direct"] = json{{"box", t}, {"value", v}, {"tail", tl}};
            }
            out.record(o);
        } else if (name == "hurwitz-avg") {
            auto xs = parse_grid(xs_raw);
            sequence_h seq;
            make_sequence(sequence, tau, cmd->count("--tau") > 0, seq);
            int k = frob_sequence_kind(seq.get());
            htable_h tab;
            std::string path = cache_path(hurwitz_cache);
            if (!path.empty()) {
                uint64_t need = k == FROB_SEQ_CONSTANT ? 4 * xs.back() : 0;
                if (need) check(frob_htable_load_or_build(path.c_str(), need, tab.out()));
            }
            double C = k == FROB_SEQ_CONSTANT && moment == 1 ? one_curve_constant(tau, ups, om) : NAN;
            json arr = json::array();
            for (uint64_t x : xs) {
                frob_hurwitz_avg h;
                check(frob_hurwitz_avg_eval(seq.get(), x, ups, om, moment, tab.get(), &h));
                double pred = NAN;
                if (moment == 1 && k == FROB_SEQ_CONSTANT) pred = C * pi_half_of((double)x);
                else if (moment == 1 && k >= FROB_SEQ_EXTREMAL_PLUS)
                    pred = (k == FROB_SEQ_EXTREMAL_BOTH ? 2 : 1) * extremal_main((double)x);
                json row;
                row["x"] = x;
                row["value"] = h.value;
                row["primesUsed"] = h.primes_used;
                row["predictedMainTerm"] = std::isnan(pred) ? json() : json(pred);
                row["ratio"] = std::isnan(pred) ? json() : json(h.value / pred);
                arr.push_back(row);
            }
            out.rows(arr);
        } else if (name == "pi-half") {
            json arr = json::array();
            for (const auto& s : xs_raw) {
                double x = (double)parse_bound(s);
                arr.push_back(json{{"x", x}, {"value", pi_half_of(x)}});
            }
            out.rows(arr);
        } else if (name == "clt-moments" || name == "clt-eigen") {
            auto xs = parse_grid(xs_raw);
            if (xs.size() != 1) throw config_error("field x: moments take a single bound");
            if (r < 1) throw config_error("field r: must be >= 1");
            std::vector<double> V(r);
            frob_moment_info info{};
            std::vector<uint64_t> plist;
            json o;
            o["x"] = xs[0];
            if (name == "clt-moments") {
                std::string s1, s2;
                auto ph = parse_map(phi, s1, "phi"), ps = parse_map(psi, s2, "psi");
                auto P = parse_primes(primes, plist);
                check(frob_clt_moments(ph, ps, A, B, P, xs[0], r, collapsed, 2e10, V.data(), &info));
                o["A"] = A;
                o["B"] = B;
                o["phi"] = phi;
                o["psi"] = psi;
                o["primes"] = primes;
            } else {
                eigen_h t;
                check(frob_eigen_load(table.c_str(), t.out()));
                if (primes != "all") {
                    auto P = parse_primes(primes, plist);
                    if (P.kind != FROB_PRIMES_LIST) throw config_error("field primes: eigen tables take all or list:");
                }
                check(frob_eigen_moments(t.get(), plist.data(), plist.size(), xs[0], r, V.data(), &info));
                o["table"] = table;
            }
            o["r"] = r;
            o["V"] = V;
            std::vector<uint64_t> target;
            for (unsigned k = 1; k <= r; ++k) target.push_back(frob_gaussian_moment(k));
            o["gaussianTarget"] = target;
            o["curves"] = info.curves;
            o["pairs"] = info.pairs;
            o["primesUsed"] = info.primes;
            out.record(o);
        }
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const lib_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }

    if (!manifest_path.empty()) {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        json man{{"tool", "frobstat"}, {"version", frob_version()}, {"command", name},
                 {"argv", std::vector<std::string>(argv + 1, argv + argc)}, {"threads", frob_threads()},
                 {"wallSeconds", secs}};
        std::ofstream(manifest_path) << man.dump(2) << "\n";
    }
    return exit_ok;
}
