#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "nomlam/lattice.hpp"
#include "nomlam/opens.hpp"
#include "nomlam/oracle.hpp"
#include "nomlam/points.hpp"

using namespace nomlam;

namespace {

constexpr int kYes = 0, kNo = 1, kUnknown = 2, kUsage = 3;

struct Config {
    Budget budget;
    std::uint64_t seed = 0;
    std::string rules;
    std::string beta = "on", eta = "on";
    bool structured = false;
    bool canonical = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Theory make_theory(const Config& c) {
    Theory th = c.rules.empty() ? Theory::beta_eta() : parse_rule_file(read_file(c.rules));
    // explicit flags win over the rule file header
    if (c.beta != "on" && c.beta != "off") throw CLI::ValidationError("--beta", "expects on|off");
    if (c.eta != "on" && c.eta != "off") throw CLI::ValidationError("--eta", "expects on|off");
    if (c.rules.empty() || c.beta == "off") th.beta = c.beta == "on";
    if (c.rules.empty() || c.eta == "off") th.eta_expansion = c.eta == "on";
    return th;
}

Engine make_engine(const Config& c) {
    c.budget.validate();
    return Engine(make_theory(c), c.budget);
}

std::string show(const Config& c, const Term& t) { return print(t, c.canonical); }

int report_decision(const Decision3& d) {
    if (d.is_yes()) {
        std::cout << "Yes depth=" << d.depth << '\n';
        return kYes;
    }
    if (d.is_no()) {
        std::cout << "No\n";
        return kNo;
    }
    std::cout << "Unknown" << (d.pruned ? " pruned" : "") << '\n';
    return kUnknown;
}

// digit runs compare numerically, so law#9 sorts before law#10
bool natural_less(const std::string& x, const std::string& y) {
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (std::isdigit(static_cast<unsigned char>(x[i])) && std::isdigit(static_cast<unsigned char>(y[j]))) {
            std::size_t i2 = i, j2 = j;
            while (i2 < x.size() && std::isdigit(static_cast<unsigned char>(x[i2]))) ++i2;
            while (j2 < y.size() && std::isdigit(static_cast<unsigned char>(y[j2]))) ++j2;
            std::string a = x.substr(i, i2 - i), b = y.substr(j, j2 - j);
            a.erase(0, std::min(a.find_first_not_of('0'), a.size()));
            b.erase(0, std::min(b.find_first_not_of('0'), b.size()));
            if (a.size() != b.size()) return a.size() < b.size();
            if (a != b) return a < b;
            i = i2;
            j = j2;
        } else {
            if (x[i] != y[j]) return x[i] < y[j];
            ++i;
            ++j;
        }
    }
    return x.size() - i < y.size() - j;
}

int emit(const Report& rep, const std::vector<std::string>& header, const Config& c) {
    std::vector<Record> rs = rep.records();
    std::stable_sort(rs.begin(), rs.end(), [](const Record& a, const Record& b) {
        if (a.suite != b.suite) return a.suite < b.suite;
        return natural_less(a.case_id, b.case_id);
    });
    for (const std::string& h : header) std::cout << "# " << h << '\n';
    Report sorted;
    for (Record& r : rs) sorted.add(std::move(r));
    if (c.structured) {
        sorted.write(std::cout);
    } else {
        for (const Record& r : sorted.records())
            if (r.status == Status::Fail || r.status == Status::Undecided)
                std::cout << r.suite << ' ' << r.case_id << ' ' << to_string(r.status) << ' ' << r.detail << '\n';
    }
    std::cout << "# " << rep.summary() << '\n';
    if (rep.count(Status::Fail) > 0) return kNo;
    if (rep.count(Status::Undecided) > 0) return kUnknown;
    return kYes;
}

const std::map<std::string, std::string>& suite_laws() {
    static const std::map<std::string, std::string> m = {
        {"sigma", "substitution axioms (variable, identity, garbage, alpha, composition), renaming is a swap, "
                  "substitution removes the atom, three substitutions make a swap"},
        {"points", "principal points under application, forall of a ppa is a lambda, substitution on "
                   "principal points, both substitution characterisations, substitution over application, "
                   "special distributivity, amgis adjunction, fresh points"},
        {"appendixA", "forall: alpha, meet, join, inclusion, freshness, adjunction"},
        {"appendixB", "exists: inclusion, support, greatest lower bound, application and lambda"},
        {"opens", "beta and eta inclusions, counit and unit of application and ppa, unions, meets"},
    };
    return m;
}

std::vector<Term> read_terms(const std::string& path) {
    std::vector<Term> out;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_term(line));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nomlam: nominal lambda-calculus workbench"};
    app.require_subcommand(1);
    // global options may follow the subcommand
    app.fallthrough();
    Config cfg;
    app.add_option("--depth", cfg.budget.max_depth, "reduction steps")->capture_default_str();
    app.add_option("--max-size", cfg.budget.max_term_size, "term size cap")->capture_default_str();
    app.add_option("--max-frontier", cfg.budget.max_frontier, "search states cap")->capture_default_str();
    app.add_option("--rules", cfg.rules, "rule file")->check(CLI::ExistingFile);
    app.add_option("--beta", cfg.beta, "on|off")->capture_default_str();
    app.add_option("--eta", cfg.eta, "on|off")->capture_default_str();
    app.add_option("--seed", cfg.seed, "RNG seed (NOMLAM_SEED overrides)")->capture_default_str();
    app.add_flag("--structured", cfg.structured, "one suite,case,verdict,depth,detail record per line");
    app.add_flag("--canonical", cfg.canonical, "print bound atoms canonically");

    int code = kYes;
    std::string s1, s2, s3, perm_text;

    auto* alpha = app.add_subcommand("alpha", "alpha-equivalence");
    alpha->add_option("S", s1)->required();
    alpha->add_option("T", s2)->required();
    alpha->callback([&] {
        bool eq = parse_term(s1) == parse_term(s2);
        std::cout << (eq ? "Yes" : "No") << '\n';
        code = eq ? kYes : kNo;
    });

    auto* sub = app.add_subcommand("subst", "capture-avoiding S[a:=U]");
    sub->add_option("S", s1)->required();
    sub->add_option("a", s2)->required();
    sub->add_option("U", s3)->required();
    sub->callback([&] {
        auto a = parse_atom_name(s2);
        if (!a) throw CLI::ValidationError("a", "not an atom name: " + s2);
        std::cout << show(cfg, subst(parse_term(s1), *a, parse_term(s3))) << '\n';
    });

    auto* act = app.add_subcommand("act", "permutation action");
    act->add_option("PERM", perm_text)->required();
    act->add_option("S", s1)->required();
    act->callback([&] {
        auto pi = parse_perm(perm_text);
        if (!pi) throw CLI::ValidationError("PERM", "not a permutation: " + perm_text);
        std::cout << show(cfg, term_act(*pi, parse_term(s1))) << '\n';
    });

    auto* reduce = app.add_subcommand("reduce", "one-step successors");
    reduce->add_option("S", s1)->required();
    reduce->callback([&] {
        cfg.budget.validate();
        Successors next = successors(make_theory(cfg), parse_term(s1), cfg.budget);
        for (const Term& t : next.terms) std::cout << show(cfg, t) << '\n';
        if (next.pruned) std::cout << "# pruned\n";
    });

    bool show_path = false;
    auto* reach_cmd = app.add_subcommand("reach", "bounded S ->* T");
    reach_cmd->add_option("S", s1)->required();
    reach_cmd->add_option("T", s2)->required();
    reach_cmd->add_flag("--path", show_path, "print the witness");
    reach_cmd->callback([&] {
        Decision3 d = make_engine(cfg).reach(parse_term(s1), parse_term(s2));
        code = report_decision(d);
        if (show_path)
            for (const Term& t : d.path) std::cout << "  " << show(cfg, t) << '\n';
    });

    auto* eq = app.add_subcommand("eq", "bounded S = T in the symmetric closure");
    eq->add_option("S", s1)->required();
    eq->add_option("T", s2)->required();
    eq->callback([&] {
        cfg.budget.validate();
        Theory th = make_theory(cfg);
        th.equality_mode = true;
        code = report_decision(eq_check(th, parse_term(s1), parse_term(s2), cfg.budget));
    });

    auto* mem = app.add_subcommand("member", "T in a point expression");
    mem->add_option("T", s1)->required();
    mem->add_option("POINTEXPR", s2)->required();
    mem->callback([&] { code = report_decision(member(make_engine(cfg), parse_term(s1), parse_point(s2))); });

    auto* sset = app.add_subcommand("subset", "E1 included in E2");
    sset->add_option("E1", s1)->required();
    sset->add_option("E2", s2)->required();
    sset->callback([&] { code = report_decision(subset(make_engine(cfg), parse_point(s1), parse_point(s2))); });

    auto* norm = app.add_subcommand("normalize", "rewrite a point expression");
    norm->add_option("E", s1)->required();
    norm->callback([&] { std::cout << print(normalize(parse_point(s1))) << '\n'; });

    auto* den = app.add_subcommand("denote", "compact-open denotation");
    den->add_option("S", s1)->required();
    den->callback([&] { std::cout << print(denote(parse_term(s1))) << '\n'; });

    auto* leq = app.add_subcommand("leq", "denotation inclusion");
    leq->add_option("S", s1)->required();
    leq->add_option("T", s2)->required();
    leq->callback([&] { code = report_decision(denote_leq(make_engine(cfg), parse_term(s1), parse_term(s2))); });

    auto* mo = app.add_subcommand("member-open", "point in an open set");
    mo->add_option("POINT", s1)->required();
    mo->add_option("OPEN", s2)->required();
    mo->callback([&] { code = report_decision(open_member(make_engine(cfg), parse_point(s1), parse_open(s2))); });

    std::string suite;
    int cases = 500;
    auto* laws = app.add_subcommand("laws", "run a property suite");
    laws->add_option("--suite", suite)
        ->required()
        ->check(CLI::IsMember({"sigma", "points", "opens", "appendixA", "appendixB", "all"}));
    laws->add_option("--cases", cases, "instances per law (sigma, opens)")->capture_default_str();
    laws->callback([&] {
        Engine eng = make_engine(cfg);
        std::vector<Term> corpus = default_point_corpus();
        Report rep;
        std::vector<std::string> header{"theory " + eng.theory().describe(), "seed " + std::to_string(cfg.seed)};
        auto want = [&](const std::string& s) { return suite == s || suite == "all"; };
        for (const auto& [name, laws_text] : suite_laws())
            if (want(name)) header.push_back("suite " + name + ": " + laws_text);
        if (want("sigma")) rep.merge(check_sigma_axioms(cfg.seed, cases));
        if (want("points")) rep.merge(check_point_laws(eng, corpus, cfg.seed));
        if (want("appendixA")) rep.merge(check_forall_laws(eng, corpus, cfg.seed));
        if (want("appendixB")) rep.merge(check_exists_laws(eng, corpus, cfg.seed));
        if (want("opens")) rep.merge(check_opens_laws(eng, corpus, cfg.seed, cases));
        code = emit(rep, header, cfg);
    });

    auto* lat = app.add_subcommand("lattice", "finite distributive lattice duality");
    lat->require_subcommand(1);
    std::string lattice_file;
    auto* lcheck = lat->add_subcommand("check", "check one lattice file");
    lcheck->add_option("FILE", lattice_file)->required()->check(CLI::ExistingFile);
    lcheck->callback([&] {
        FiniteDL l = parse_lattice(read_file(lattice_file));
        code = emit(check_duality(l, lattice_file), {"lattice " + std::to_string(l.size()) + " elements"}, cfg);
    });
    std::size_t poset_size = 6;
    int count = 50;
    auto* lrand = lat->add_subcommand("random", "Birkhoff lattices of random posets");
    lrand->add_option("--poset-size", poset_size)->capture_default_str()->check(CLI::Range(1, 6));
    lrand->add_option("--count", count)->capture_default_str()->check(CLI::PositiveNumber);
    lrand->callback([&] {
        std::mt19937_64 rng(cfg.seed);
        Report rep;
        for (int k = 0; k < count; ++k)
            rep.merge(check_duality(birkhoff_from_poset(random_poset(rng, poset_size)), "L" + std::to_string(k)));
        code = emit(rep, {"seed " + std::to_string(cfg.seed), "count " + std::to_string(count)}, cfg);
    });

    auto* orc = app.add_subcommand("oracle", "finite exact semantics");
    orc->require_subcommand(1);
    std::string seeds_file;
    bool require_closed = false;
    std::size_t max_terms = 12;
    auto* obuild = orc->add_subcommand("build", "closure of a seed set");
    obuild->add_option("--seeds", seeds_file)->required()->check(CLI::ExistingFile);
    obuild->add_flag("--require-closed", require_closed);
    obuild->add_option("--max-terms", max_terms)->capture_default_str()->check(CLI::Range(1, 64));
    obuild->callback([&] {
        cfg.budget.validate();
        try {
            Universe u = build_universe(make_theory(cfg), read_terms(seeds_file), max_terms, require_closed, cfg.budget);
            std::cout << print(u);
            code = u.closed() ? kYes : kUnknown;
        } catch (const ClosureCapExceeded& e) {
            std::cout << e.what() << '\n';
            code = kUnknown;
        }
    });
    std::string law;
    auto* oval = orc->add_subcommand("validate", "symbolic rules against exact semantics");
    oval->add_option("--law", law)
        ->required()
        ->check(CLI::IsMember({"identity", "ppa-union", "forall-probe", "lsm-id", "amgis", "forall-union", "gate", "all"}));
    oval->add_option("--seeds", seeds_file, "one seed set per line, terms separated by ';'")
        ->check(CLI::ExistingFile);
    oval->add_option("--max-terms", max_terms)->capture_default_str()->check(CLI::Range(1, 20));
    oval->callback([&] {
        std::vector<std::vector<Term>> sets = default_universe_seeds();
        if (!seeds_file.empty()) {
            sets.clear();
            std::istringstream in(read_file(seeds_file));
            std::string line;
            while (std::getline(in, line)) {
                auto hash = line.find('#');
                if (hash != std::string::npos) line.erase(hash);
                std::vector<Term> set;
                std::istringstream parts(line);
                std::string part;
                while (std::getline(parts, part, ';'))
                    if (part.find_first_not_of(" \t\r") != std::string::npos) set.push_back(parse_term(part));
                if (!set.empty()) sets.push_back(std::move(set));
            }
        }
        Report rep = validate_oracle(sets, law, max_terms);
        code = emit(rep, {"oracle law " + law + ", beta-only universes of at most " + std::to_string(max_terms) + " terms"},
                    cfg);
    });

    app.parse_complete_callback([&] {
        if (const char* env = std::getenv("NOMLAM_SEED")) {
            try {
                cfg.seed = std::stoull(env);
            } catch (const std::exception&) {
                throw CLI::ValidationError("NOMLAM_SEED", std::string("not an integer: ") + env);
            }
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error at " << e.position() << ": " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::length_error& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return kUnknown;
    } catch (const std::logic_error& e) {
        // a denotation or coherence assertion fired
        std::cerr << "internal check failed: " << e.what() << '\n';
        return kNo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return code;
}
