#include "qsieve/cli.hpp"

#include "qsieve/errors.hpp"
#include "qsieve/io.hpp"
#include "qsieve/ks_search.hpp"
#include "qsieve/sieve.hpp"
#include "qsieve/valuations.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>

namespace qsieve::cli {

using json = nlohmann::ordered_json;

namespace {

struct Common {
    std::string mode;  // empty: take the file's
    std::vector<std::string> tol;
    bool json = false;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--mode", c.mode, "Sieve mode: o (with constants) or ostar (without)")
        ->check(CLI::IsMember({"o", "ostar"}));
    cmd->add_option("--tol", c.tol, "Tolerance override key=value (herm, proj, rec, psd, trace, group, one)");
    cmd->add_flag("--json", c.json, "Machine-readable output");
}

ToleranceOverrides overrides_of(const Common& c)
{
    ToleranceOverrides out;
    for (const auto& kv : c.tol) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Parse, "--tol expects key=value, got \"" + kv + "\"");
        }
        double v = 0.0;
        try {
            v = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, "--tol value is not a number: \"" + kv + "\"");
        }
        Tolerances probe;
        set_tolerance(probe, kv.substr(0, eq), v);  // validates the key
        out[kv.substr(0, eq)] = v;
    }
    return out;
}

SieveMode mode_of(const Common& c, SieveMode file_mode)
{
    if (c.mode.empty()) {
        return file_mode;
    }
    return c.mode == "o" ? SieveMode::WithConstants : SieveMode::WithoutConstants;
}

std::vector<std::string> labels_of(const Sieve& s, const std::vector<double>& eigenvalues)
{
    std::vector<std::string> out;
    for (const auto& p : s.partitions()) {
        out.push_back(partition_label(p, eigenvalues));
    }
    return out;
}

std::string subset_label(BorelSubset subset, const std::vector<double>& eigenvalues)
{
    std::string out = "{";
    bool first = true;
    for (auto i : subset.indices()) {
        out += (first ? "" : ",") + format_real(eigenvalues.at(i));
        first = false;
    }
    return out + "}";
}

json subset_json(BorelSubset subset, const std::vector<double>& eigenvalues)
{
    json out = json::array();
    for (auto i : subset.indices()) {
        out.push_back(std::stod(format_real(eigenvalues.at(i))));
    }
    return out;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    Common common;
    std::string system;
    std::string valuation;
    std::string proposition;
};

int cmd_eval(const EvalArgs& a, std::ostream& out)
{
    const auto sys = load_system(a.system, overrides_of(a.common));
    const auto mode = mode_of(a.common, sys.mode);
    const auto nu = parse_valuation(sys, a.valuation, mode);
    const auto p = parse_proposition(sys, a.proposition);
    const auto sieve = evaluate(nu, p);
    const auto& ev = p.op.eigenvalues();
    const auto labels = labels_of(sieve, ev);
    const auto cls = to_string(classify(sieve));

    if (a.common.json) {
        json doc;
        doc["proposition"] = a.proposition;
        doc["subset"] = subset_json(p.subset, ev);
        doc["valuation"] = a.valuation;
        doc["mode"] = to_string(mode);
        doc["sieve"] = labels;
        doc["classification"] = cls;
        out << doc.dump(2) << "\n";
        return exit_ok;
    }
    out << "proposition: " << a.proposition << "\n";
    out << "valuation: " << a.valuation << " (mode " << to_string(mode) << ")\n";
    out << "sieve (" << labels.size() << "):\n";
    for (const auto& l : labels) {
        out << "  " << l << "\n";
    }
    out << "classification: " << cls << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------- axioms

struct AxiomArgs {
    Common common;
    std::string system;
    std::string valuation;
    std::string op;  // empty: every operator
};

int cmd_axioms(const AxiomArgs& a, std::ostream& out)
{
    const auto sys = load_system(a.system, overrides_of(a.common));
    const auto mode = mode_of(a.common, sys.mode);
    const auto nu = parse_valuation(sys, a.valuation, mode);

    std::vector<const OperatorEntry*> targets;
    if (a.op.empty()) {
        for (const auto& o : sys.operators) {
            targets.push_back(&o);
        }
    } else {
        targets.push_back(&sys.op(a.op));
    }

    bool pass = true;
    json doc;
    doc["valuation"] = a.valuation;
    doc["kind"] = to_string(nu.kind());
    doc["mode"] = to_string(mode);
    json ops = json::array();
    std::ostringstream text;
    text << "valuation: " << a.valuation << " (" << to_string(nu.kind()) << ", mode " << to_string(mode) << ")\n";

    for (const auto* entry : targets) {
        const auto& op = entry->op;
        const auto& ev = op.eigenvalues();
        const auto report = check_axioms(nu, op);

        NaturalityReport nat;
        for (const auto& part : PartitionLattice::of(op.spectrum_size())->partitions()) {
            auto r = check_naturality(nu, op, CoarseGraining::from_partition(part).values());
            nat.checked += r.checked;
            nat.violations.insert(nat.violations.end(), r.violations.begin(), r.violations.end());
        }

        std::size_t pairs = 0;
        std::size_t strict = 0;
        const std::uint64_t subsets = std::uint64_t {1} << op.spectrum_size();
        for (std::uint64_t d1 = 1; d1 < subsets; ++d1) {
            for (std::uint64_t d2 = d1 + 1; d2 < subsets; ++d2) {
                ++pairs;
                if (check_disjunction_strength(nu, op, IndexSet::from_bits(d1), IndexSet::from_bits(d2)) ==
                    DisjunctionStrength::StrictInequality) {
                    ++strict;
                }
            }
        }

        const bool op_pass = report.mandatory_ok() && nat.ok();
        pass = pass && op_pass;
        const auto unit_sieve = report.unit_value ? labels_of(*report.unit_value, ev) : std::vector<std::string> {};

        json o;
        o["operator"] = entry->name;
        o["null"] = report.null_ok;
        o["monotonicity"] = report.monotone_ok;
        o["exclusivity"] = report.exclusive_ok;
        o["func"] = report.func_ok;
        o["unit"] = report.unit_ok;
        o["unit_sieve"] = unit_sieve;
        o["naturality"] = nat.ok();
        o["naturality_checks"] = nat.checked;
        o["disjunction_pairs"] = pairs;
        o["disjunction_strict"] = strict;
        json vs = json::array();
        for (const auto& v : report.violations) {
            if (v.axiom == "unit") {
                continue;
            }
            vs.push_back({{"axiom", v.axiom},
                          {"first", subset_json(v.first, ev)},
                          {"second", subset_json(v.second, ev)},
                          {"detail", v.detail}});
        }
        for (const auto& v : nat.violations) {
            vs.push_back({{"axiom", "naturality"}, {"detail", v}});
        }
        o["violations"] = std::move(vs);
        ops.push_back(std::move(o));

        auto verdict = [](bool ok) { return ok ? "pass" : "FAIL"; };
        text << "operator " << entry->name << " (spectrum " << subset_label(IndexSet::all(ev.size()), ev) << ")\n";
        text << "  null: " << verdict(report.null_ok) << "\n";
        text << "  monotonicity: " << verdict(report.monotone_ok) << "\n";
        text << "  exclusivity: " << verdict(report.exclusive_ok) << "\n";
        text << "  func: " << verdict(report.func_ok) << "\n";
        text << "  unit: " << (report.unit_ok ? "holds" : "violated (informational)");
        if (!report.unit_ok) {
            text << ", nu(A in sigma(A)) = {";
            for (std::size_t i = 0; i < unit_sieve.size(); ++i) {
                text << (i ? " " : "") << unit_sieve[i];
            }
            text << "}";
        }
        text << "\n";
        text << "  naturality: " << verdict(nat.ok()) << " (" << nat.checked << " squares)\n";
        text << "  disjunction: strict inequality for " << strict << " of " << pairs << " pairs\n";
        for (const auto& v : report.violations) {
            if (v.axiom == "unit") {
                continue;
            }
            text << "  violation " << v.axiom << ": " << subset_label(v.first, ev) << " / "
                 << subset_label(v.second, ev) << ": " << v.detail << "\n";
        }
        for (const auto& v : nat.violations) {
            text << "  violation naturality: " << v << "\n";
        }
    }
    doc["operators"] = std::move(ops);
    doc["pass"] = pass;

    if (a.common.json) {
        out << doc.dump(2) << "\n";
    } else {
        out << text.str() << "result: " << (pass ? "pass" : "FAIL") << "\n";
    }
    return pass ? exit_ok : exit_violation;
}

// ---------------------------------------------------------------- ks

struct KsArgs {
    Common common;
    std::string contexts;
    bool witness = false;
    bool minimize = false;
};

int cmd_ks(const KsArgs& a, std::ostream& out)
{
    const auto fam = load_contexts(a.contexts, overrides_of(a.common));
    const auto section = search_dual_section(fam);

    json doc;
    doc["contexts"] = fam.size();
    doc["dimension"] = fam.dim();
    doc["shared_projectors"] = fam.shared().size();
    doc["result"] = section ? "colorable" : "uncolorable";
    std::ostringstream text;
    text << "contexts: " << fam.size() << " (dimension " << fam.dim() << ")\n";
    text << "shared projectors: " << fam.shared().size() << "\n";
    text << "result: " << (section ? "colorable" : "uncolorable") << "\n";

    if (section) {
        const auto check = verify_dual_section(fam, *section);
        if (!check.ok()) {
            throw Error(ErrorKind::InvalidState, "search returned an invalid witness: " + check.violations.front());
        }
        if (a.witness) {
            json w = json::object();
            text << "witness:\n";
            for (std::size_t c = 0; c < fam.size(); ++c) {
                w[fam.name(c)] = section->chosen[c];
                text << "  " << fam.name(c) << ": atom " << section->chosen[c] << "\n";
            }
            doc["witness"] = std::move(w);
        }
        if (a.minimize) {
            text << "minimize: family is colorable, nothing to minimize\n";
        }
    } else if (a.minimize) {
        const auto minimal = minimal_uncolorable_subfamily(fam);
        doc["minimal_subfamily"] = minimal.names();
        text << "minimal uncolorable subfamily (" << minimal.size() << "):";
        for (const auto& n : minimal.names()) {
            text << " " << n;
        }
        text << "\n";
    }

    if (a.common.json) {
        out << doc.dump(2) << "\n";
    } else {
        out << text.str();
    }
    return section ? exit_ok : exit_uncolorable;
}

// ---------------------------------------------------------------- dot

struct DotArgs {
    Common common;
    std::string system;
    std::string op;
    std::string valuation;
    std::string proposition;
};

int cmd_dot(const DotArgs& a, std::ostream& out)
{
    const auto sys = load_system(a.system, overrides_of(a.common));
    const auto mode = mode_of(a.common, sys.mode);
    const auto& op = sys.op(a.op).op;
    std::vector<std::string> labels;
    for (double v : op.eigenvalues()) {
        labels.push_back(format_real(v));
    }
    if (a.valuation.empty() != a.proposition.empty()) {
        throw Error(ErrorKind::Parse, "--valuation and --proposition must be given together");
    }
    if (a.valuation.empty()) {
        out << partition_lattice_dot(op.spectrum_size(), nullptr, labels);
        return exit_ok;
    }
    const auto nu = parse_valuation(sys, a.valuation, mode);
    const auto p = parse_proposition(sys, a.proposition);
    if (!approx_equal(p.op.matrix(), op.matrix(), op.tolerances().rec)) {
        throw Error(ErrorKind::InvalidArgument, "the proposition must be about " + a.op);
    }
    const auto sieve = evaluate(nu, p);
    out << partition_lattice_dot(op.spectrum_size(), &sieve, labels);
    return exit_ok;
}

// ---------------------------------------------------------------- heyting

struct HeytingArgs {
    Common common;
    std::size_t k = 0;
    std::string op;
    std::string first;
    std::string second;
    bool second_given = false;
    bool close = false;
};

// "{{0,1},{2}};{{0,1,2}}": partitions in index notation separated by ';'.
Sieve sieve_of(const std::string& text, std::size_t k, SieveMode mode, bool close)
{
    std::vector<Partition> parts;
    std::string_view rest = text;
    while (!rest.empty()) {
        const auto semi = rest.find(';');
        std::string item(rest.substr(0, semi));
        rest = semi == std::string_view::npos ? std::string_view {} : rest.substr(semi + 1);
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (item.empty()) {
            continue;
        }
        if (item.size() < 4 || item.front() != '{' || item.back() != '}') {
            throw Error(ErrorKind::Parse, "bad partition \"" + item + "\"");
        }
        std::vector<Partition::Block> blocks;
        const std::string body = item.substr(1, item.size() - 2);
        std::size_t pos = 0;
        while (pos < body.size()) {
            if (body[pos] == ',') {
                ++pos;
                continue;
            }
            const auto end = body.find('}', pos);
            if (body[pos] != '{' || end == std::string::npos) {
                throw Error(ErrorKind::Parse, "bad partition \"" + item + "\"");
            }
            Partition::Block block;
            std::istringstream is(body.substr(pos + 1, end - pos - 1));
            for (std::string tok; std::getline(is, tok, ',');) {
                try {
                    std::size_t used = 0;
                    const auto v = std::stoul(tok, &used);
                    if (used != tok.size()) {
                        throw std::invalid_argument(tok);
                    }
                    block.push_back(v);
                } catch (const std::exception&) {
                    throw Error(ErrorKind::Parse, "bad index \"" + tok + "\" in \"" + item + "\"");
                }
            }
            blocks.push_back(std::move(block));
            pos = end + 1;
        }
        parts.push_back(Partition::from_blocks(std::move(blocks), k));
    }
    return close ? Sieve::up_closure(k, mode, parts) : Sieve::from_partitions(k, mode, parts);
}

int cmd_heyting(const HeytingArgs& a, std::ostream& out)
{
    const auto mode = mode_of(a.common, SieveMode::WithConstants);
    const auto s1 = sieve_of(a.first, a.k, mode, a.close);
    const bool binary = a.op != "neg";
    if (binary != a.second_given) {
        throw Error(ErrorKind::Parse, a.op + (binary ? " takes two sieves" : " takes one sieve"));
    }
    const auto s2 = sieve_of(a.second, a.k, mode, a.close);
    Sieve result = a.op == "meet"      ? heyting_meet(s1, s2)
                   : a.op == "join"    ? heyting_join(s1, s2)
                   : a.op == "implies" ? heyting_implies(s1, s2)
                                       : heyting_neg(s1);
    std::vector<std::string> labels;
    for (const auto& p : result.partitions()) {
        labels.push_back(p.to_string());
    }
    if (a.common.json) {
        json doc;
        doc["k"] = a.k;
        doc["mode"] = to_string(mode);
        doc["op"] = a.op;
        doc["result"] = labels;
        doc["classification"] = to_string(classify(result));
        out << doc.dump(2) << "\n";
    } else {
        out << a.op << " (" << labels.size() << "):\n";
        for (const auto& l : labels) {
            out << "  " << l << "\n";
        }
        out << "classification: " << to_string(classify(result)) << "\n";
    }
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app {"Sieve-valued truth values for finite quantum systems", "qsieve"};
    app.require_subcommand(1);

    EvalArgs eval;
    auto* e = app.add_subcommand("eval", "Evaluate a proposition under a valuation");
    e->add_option("system", eval.system, "System file")->required();
    e->add_option("valuation", eval.valuation, "e.g. \"vector psi\", \"threshold rho 0.75\", \"partial Sz 0\"")
        ->required();
    e->add_option("proposition", eval.proposition, "e.g. \"Sx in {1}\", \"Sx = -1\"")->required();
    add_common(e, eval.common);

    AxiomArgs axioms;
    auto* x = app.add_subcommand("axioms", "Check the valuation axioms, naturality and disjunction strength");
    x->add_option("system", axioms.system, "System file")->required();
    x->add_option("valuation", axioms.valuation, "Valuation spec")->required();
    x->add_option("--operator", axioms.op, "Only this operator");
    add_common(x, axioms.common);

    KsArgs ks;
    auto* k = app.add_subcommand("ks", "Search a context family for a global two-valued section");
    k->add_option("contexts", ks.contexts, "Context file")->required();
    k->add_flag("--witness", ks.witness, "Print the chosen atom per context");
    k->add_flag("--minimize", ks.minimize, "Reduce an uncolorable family to a minimal one");
    add_common(k, ks.common);

    DotArgs dot;
    auto* d = app.add_subcommand("dot", "Partition-lattice Hasse diagram in DOT");
    d->add_option("system", dot.system, "System file")->required();
    d->add_option("operator", dot.op, "Operator name")->required();
    d->add_option("--valuation", dot.valuation, "Highlight the sieve of this valuation ...");
    d->add_option("--proposition", dot.proposition, "... on this proposition");
    add_common(d, dot.common);

    HeytingArgs hey;
    auto* h = app.add_subcommand("heyting", "Heyting operations on sieves given as partition lists");
    h->add_option("k", hey.k, "Spectrum size")->required()->check(CLI::Range(1, 7));
    h->add_option("op", hey.op, "meet | join | implies | neg")
        ->required()
        ->check(CLI::IsMember({"meet", "join", "implies", "neg"}));
    h->add_option("first", hey.first, "Partitions, e.g. \"{{0,1},{2}};{{0,1,2}}\"")->required();
    h->add_option("second", hey.second, "Second sieve (binary operations)");
    h->add_flag("--close", hey.close, "Take the up-closure of the given partitions");
    add_common(h, hey.common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& pe) {
        const int code = app.exit(pe, out, err);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (e->parsed()) {
            return cmd_eval(eval, out);
        }
        if (x->parsed()) {
            return cmd_axioms(axioms, out);
        }
        if (k->parsed()) {
            return cmd_ks(ks, out);
        }
        if (d->parsed()) {
            return cmd_dot(dot, out);
        }
        if (h->parsed()) {
            hey.second_given = h->count("second") > 0;
            return cmd_heyting(hey, out);
        }
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_input;
    }
    return exit_input;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

} // namespace qsieve::cli
