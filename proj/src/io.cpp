#include "qsieve/io.hpp"

#include "qsieve/errors.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qsieve {

using json = nlohmann::ordered_json;

namespace {

constexpr std::string_view system_format = "qsieve-system/1";
constexpr std::string_view contexts_format = "qsieve-contexts/1";

[[noreturn]] void parse_error(const std::string& where, const std::string& what)
{
    throw Error(ErrorKind::Parse, where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key)) {
        parse_error(where, std::string("missing field \"") + key + "\"");
    }
    return obj.at(key);
}

double real_of(const json& j, const std::string& where)
{
    if (!j.is_number()) {
        parse_error(where, "expected a number");
    }
    return j.get<double>();
}

Complex complex_of(const json& j, const std::string& where)
{
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2) {
        return {real_of(j[0], where + "[0]"), real_of(j[1], where + "[1]")};
    }
    parse_error(where, "expected a number or an [re, im] pair");
}

ComplexMatrix matrix_of(const json& j, std::size_t dim, const std::string& where)
{
    if (!j.is_array() || j.size() != dim) {
        parse_error(where, "expected " + std::to_string(dim) + " rows");
    }
    ComplexMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const auto row_where = where + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != dim) {
            parse_error(row_where, "expected " + std::to_string(dim) + " entries");
        }
        for (std::size_t c = 0; c < dim; ++c) {
            m(r, c) = complex_of(j[r][c], row_where + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

ComplexVector vector_of(const json& j, std::size_t dim, const std::string& where)
{
    if (!j.is_array() || j.size() != dim) {
        parse_error(where, "expected " + std::to_string(dim) + " entries");
    }
    ComplexVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        v(i) = complex_of(j[i], where + "[" + std::to_string(i) + "]");
    }
    return v;
}

json complex_json(Complex z)
{
    return json::array({z.real(), z.imag()});
}

json matrix_json(const ComplexMatrix& m)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(complex_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const ComplexVector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(complex_json(v(i)));
    }
    return out;
}

json parse_json(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        parse_error("json", e.what());
    }
}

void check_format(const json& doc, std::string_view expected)
{
    const auto& f = field(doc, "format", "document");
    if (!f.is_string() || f.get<std::string>() != expected) {
        parse_error("format", "expected \"" + std::string(expected) + "\"");
    }
}

std::size_t dimension_of(const json& doc)
{
    const auto& d = field(doc, "dimension", "document");
    if (!d.is_number_unsigned() || d.get<std::size_t>() == 0) {
        parse_error("dimension", "expected a positive integer");
    }
    return d.get<std::size_t>();
}

std::string name_of(const json& entry, const std::string& where)
{
    const auto& n = field(entry, "name", where);
    if (!n.is_string() || n.get<std::string>().empty()) {
        parse_error(where + ".name", "expected a non-empty string");
    }
    return n.get<std::string>();
}

// Re-throws a validation error with the location prefixed.
template <typename F>
auto located(const std::string& where, F&& f)
{
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Parse) {
            throw;
        }
        throw Error(e.kind(), where + ": " + e.detail());
    }
}

Tolerances tolerances_of(const json& doc, const ToleranceOverrides& overrides)
{
    Tolerances tol;
    if (doc.contains("tolerances")) {
        const auto& t = doc.at("tolerances");
        if (!t.is_object()) {
            parse_error("tolerances", "expected an object");
        }
        for (const auto& [key, value] : t.items()) {
            located("tolerances." + key, [&] {
                set_tolerance(tol, key, real_of(value, "tolerances." + key));
                return 0;
            });
        }
    }
    for (const auto& [key, value] : overrides) {
        set_tolerance(tol, key, value);
    }
    return tol;
}

} // namespace

void set_tolerance(Tolerances& tol, const std::string& key, double value)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorKind::InvalidArgument, "tolerance " + key + " must be positive");
    }
    if (key == "herm") tol.herm = value;
    else if (key == "proj") tol.proj = value;
    else if (key == "rec") tol.rec = value;
    else if (key == "psd") tol.psd = value;
    else if (key == "trace") tol.trace = value;
    else if (key == "group") tol.group = value;
    else if (key == "one") tol.one = value;
    else throw Error(ErrorKind::InvalidArgument, "unknown tolerance \"" + key + "\"");
}

// ---------------------------------------------------------------- system files

const OperatorEntry& SystemFile::op(std::string_view name) const
{
    for (const auto& o : operators) {
        if (o.name == name) {
            return o;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown operator \"" + std::string(name) + "\"");
}

const StateEntry& SystemFile::state(std::string_view name) const
{
    for (const auto& s : states) {
        if (s.name == name) {
            return s;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown state \"" + std::string(name) + "\"");
}

SystemFile parse_system(std::string_view text, const ToleranceOverrides& overrides)
{
    const auto doc = parse_json(text);
    check_format(doc, system_format);

    SystemFile sys;
    sys.dimension = dimension_of(doc);
    sys.tolerances = tolerances_of(doc, overrides);
    if (doc.contains("mode")) {
        const auto& m = doc.at("mode");
        if (m == "o") {
            sys.mode = SieveMode::WithConstants;
        } else if (m == "ostar") {
            sys.mode = SieveMode::WithoutConstants;
        } else {
            parse_error("mode", "expected \"o\" or \"ostar\"");
        }
    }

    const auto& ops = field(doc, "operators", "document");
    if (!ops.is_array()) {
        parse_error("operators", "expected an array");
    }
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const auto where = "operators[" + std::to_string(i) + "]";
        const auto& entry = ops[i];
        auto name = name_of(entry, where);
        for (const auto& o : sys.operators) {
            if (o.name == name) {
                parse_error(where, "duplicate operator \"" + name + "\"");
            }
        }
        if (entry.contains("matrix")) {
            const auto m = matrix_of(entry.at("matrix"), sys.dimension, where + ".matrix");
            const double scale = entry.contains("scale") ? real_of(entry.at("scale"), where + ".scale") : 1.0;
            auto op = located(where, [&] { return SpectralOperator::decompose(scale * m, sys.tolerances); });
            sys.operators.push_back(OperatorEntry {std::move(name), std::move(op), OperatorEntry::Form::Matrix, m, scale});
        } else if (entry.contains("spectral")) {
            const auto& s = entry.at("spectral");
            const auto& ev = field(s, "eigenvalues", where + ".spectral");
            const auto& pr = field(s, "projectors", where + ".spectral");
            if (!ev.is_array() || !pr.is_array() || ev.size() != pr.size() || ev.empty()) {
                parse_error(where + ".spectral", "eigenvalues and projectors must be equal-length arrays");
            }
            std::vector<double> values;
            std::vector<ComplexMatrix> projectors;
            for (std::size_t k = 0; k < ev.size(); ++k) {
                values.push_back(real_of(ev[k], where + ".spectral.eigenvalues[" + std::to_string(k) + "]"));
                projectors.push_back(
                    matrix_of(pr[k], sys.dimension, where + ".spectral.projectors[" + std::to_string(k) + "]"));
            }
            auto op = located(where, [&] { return SpectralOperator::from_spectrum(values, projectors, sys.tolerances); });
            sys.operators.push_back(OperatorEntry {std::move(name), std::move(op), OperatorEntry::Form::Spectral, {}, 1.0});
        } else {
            parse_error(where, "expected \"matrix\" or \"spectral\"");
        }
    }

    if (doc.contains("states")) {
        const auto& states = doc.at("states");
        if (!states.is_array()) {
            parse_error("states", "expected an array");
        }
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto where = "states[" + std::to_string(i) + "]";
            const auto& entry = states[i];
            auto name = name_of(entry, where);
            for (const auto& s : sys.states) {
                if (s.name == name) {
                    parse_error(where, "duplicate state \"" + name + "\"");
                }
            }
            auto state = located(where, [&] {
                if (entry.contains("vector")) {
                    return QuantumState::vector(vector_of(entry.at("vector"), sys.dimension, where + ".vector"),
                                                sys.tolerances);
                }
                if (entry.contains("density")) {
                    return QuantumState::density(matrix_of(entry.at("density"), sys.dimension, where + ".density"),
                                                 sys.tolerances);
                }
                if (entry.contains("projector")) {
                    return QuantumState::projector(
                        matrix_of(entry.at("projector"), sys.dimension, where + ".projector"), sys.tolerances);
                }
                parse_error(where, "expected \"vector\", \"density\" or \"projector\"");
            });
            sys.states.push_back(StateEntry {std::move(name), std::move(state)});
        }
    }
    return sys;
}

SystemFile load_system(const std::string& path, const ToleranceOverrides& overrides)
{
    return parse_system(read_file(path), overrides);
}

std::string serialize_system(const SystemFile& sys)
{
    json doc;
    doc["format"] = system_format;
    doc["dimension"] = sys.dimension;
    doc["mode"] = to_string(sys.mode);
    const auto& t = sys.tolerances;
    doc["tolerances"] = {{"herm", t.herm},   {"proj", t.proj},   {"rec", t.rec}, {"psd", t.psd},
                         {"trace", t.trace}, {"group", t.group}, {"one", t.one}};
    json ops = json::array();
    for (const auto& o : sys.operators) {
        json entry;
        entry["name"] = o.name;
        if (o.form == OperatorEntry::Form::Matrix) {
            entry["matrix"] = matrix_json(o.matrix);
            if (o.scale != 1.0) {
                entry["scale"] = o.scale;
            }
        } else {
            json projectors = json::array();
            for (const auto& p : o.op.projectors()) {
                projectors.push_back(matrix_json(p));
            }
            entry["spectral"] = {{"eigenvalues", o.op.eigenvalues()}, {"projectors", std::move(projectors)}};
        }
        ops.push_back(std::move(entry));
    }
    doc["operators"] = std::move(ops);
    json states = json::array();
    for (const auto& s : sys.states) {
        json entry;
        entry["name"] = s.name;
        switch (s.state.kind()) {
        case QuantumState::Kind::Vector: entry["vector"] = vector_json(s.state.vector_payload()); break;
        case QuantumState::Kind::Density: entry["density"] = matrix_json(s.state.matrix_payload()); break;
        case QuantumState::Kind::Projector: entry["projector"] = matrix_json(s.state.matrix_payload()); break;
        }
        states.push_back(std::move(entry));
    }
    doc["states"] = std::move(states);
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------- context files

ContextFamily parse_contexts(std::string_view text, const ToleranceOverrides& overrides)
{
    const auto doc = parse_json(text);
    check_format(doc, contexts_format);
    const auto dim = dimension_of(doc);
    const auto tol = tolerances_of(doc, overrides);

    std::map<std::string, ComplexMatrix> rays;
    if (doc.contains("vectors")) {
        const auto& vs = doc.at("vectors");
        if (!vs.is_object()) {
            parse_error("vectors", "expected an object of named vectors");
        }
        for (const auto& [name, value] : vs.items()) {
            const auto where = "vectors." + name;
            rays[name] = located(where, [&] { return ray_projector(vector_of(value, dim, where), tol); });
        }
    }
    auto ray = [&](const json& j, const std::string& where) -> const ComplexMatrix& {
        if (!j.is_string()) {
            parse_error(where, "expected a vector name");
        }
        const auto it = rays.find(j.get<std::string>());
        if (it == rays.end()) {
            parse_error(where, "unknown vector \"" + j.get<std::string>() + "\"");
        }
        return it->second;
    };

    const auto& cs = field(doc, "contexts", "document");
    if (!cs.is_array() || cs.empty()) {
        parse_error("contexts", "expected a non-empty array");
    }
    std::vector<BooleanContext> contexts;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto where = "contexts[" + std::to_string(i) + "]";
        names.push_back(cs[i].contains("name") ? name_of(cs[i], where) : "W" + std::to_string(i));
        const auto& atoms_json = field(cs[i], "atoms", where);
        if (!atoms_json.is_array() || atoms_json.empty()) {
            parse_error(where + ".atoms", "expected a non-empty array");
        }
        std::vector<ComplexMatrix> atoms;
        for (std::size_t a = 0; a < atoms_json.size(); ++a) {
            const auto& aj = atoms_json[a];
            const auto awhere = where + ".atoms[" + std::to_string(a) + "]";
            if (aj.is_string()) {
                atoms.push_back(ray(aj, awhere));
            } else if (aj.is_array()) {
                ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
                for (std::size_t r = 0; r < aj.size(); ++r) {
                    sum += ray(aj[r], awhere + "[" + std::to_string(r) + "]");
                }
                atoms.push_back(std::move(sum));
            } else if (aj.is_object()) {
                atoms.push_back(matrix_of(field(aj, "matrix", awhere), dim, awhere + ".matrix"));
            } else {
                parse_error(awhere, "expected a vector name, a list of names or {\"matrix\": ...}");
            }
        }
        contexts.push_back(located(where, [&] { return BooleanContext::from_atoms(std::move(atoms), tol); }));
    }
    return ContextFamily::from_contexts(std::move(contexts), std::move(names));
}

ContextFamily load_contexts(const std::string& path, const ToleranceOverrides& overrides)
{
    return parse_contexts(read_file(path), overrides);
}

// ---------------------------------------------------------------- text syntaxes

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string> words(std::string_view s)
{
    std::istringstream is {std::string(s)};
    std::vector<std::string> out;
    for (std::string w; is >> w;) {
        out.push_back(w);
    }
    return out;
}

double number_of(std::string_view token, const std::string& where)
{
    const std::string t(trim(token));
    auto plain = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            parse_error(where, "bad number \"" + t + "\"");
        }
        if (used != s.size()) {
            parse_error(where, "bad number \"" + t + "\"");
        }
        return v;
    };
    if (const auto slash = t.find('/'); slash != std::string::npos) {
        const double den = plain(t.substr(slash + 1));
        if (den == 0.0) {
            parse_error(where, "zero denominator");
        }
        return plain(t.substr(0, slash)) / den;
    }
    return plain(t);
}

std::size_t eigen_index_of(const SpectralOperator& op, std::string_view token, const std::string& where)
{
    const auto t = trim(token);
    if (!t.empty() && t.front() == '#') {
        const auto idx = static_cast<std::size_t>(number_of(t.substr(1), where));
        if (idx >= op.spectrum_size()) {
            parse_error(where, "eigenvalue index " + std::string(t) + " out of range");
        }
        return idx;
    }
    const double v = number_of(t, where);
    const auto idx = op.index_of(v);
    if (!idx) {
        parse_error(where, std::string(t) + " is not an eigenvalue");
    }
    return *idx;
}

} // namespace

Proposition parse_proposition(const SystemFile& system, std::string_view text)
{
    const std::string where = "proposition";
    const auto t = trim(text);
    std::string_view name;
    std::vector<std::size_t> indices;
    const OperatorEntry* entry = nullptr;

    if (const auto eq = t.find('='); eq != std::string_view::npos) {
        name = trim(t.substr(0, eq));
        entry = &system.op(name);
        indices.push_back(eigen_index_of(entry->op, t.substr(eq + 1), where));
    } else {
        const auto open = t.find('{');
        const auto close = t.rfind('}');
        if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
            !trim(t.substr(close + 1)).empty()) {
            parse_error(where, "expected \"<op> in {...}\" or \"<op> = <value>\"");
        }
        const auto head = words(t.substr(0, open));
        if (head.size() != 2 || head[1] != "in") {
            parse_error(where, "expected \"<op> in {...}\"");
        }
        name = trim(t.substr(0, t.find(head[0]) + head[0].size()));
        entry = &system.op(head[0]);
        auto body = trim(t.substr(open + 1, close - open - 1));
        while (!body.empty()) {
            const auto comma = body.find(',');
            indices.push_back(eigen_index_of(entry->op, body.substr(0, comma), where));
            body = comma == std::string_view::npos ? std::string_view {} : trim(body.substr(comma + 1));
        }
    }
    return Proposition::make(entry->op, IndexSet::from_indices(indices));
}

GeneralizedValuation parse_valuation(const SystemFile& system, std::string_view text, SieveMode mode)
{
    const std::string where = "valuation";
    const auto w = words(text);
    if (w.empty()) {
        parse_error(where, "empty valuation");
    }
    const auto& kind = w[0];
    auto expect = [&](std::size_t n) {
        if (w.size() != n) {
            parse_error(where, "\"" + kind + "\" takes " + std::to_string(n - 1) + " argument(s)");
        }
    };
    auto state_of = [&](const std::string& name, std::optional<QuantumState::Kind> required) {
        const auto& s = system.state(name).state;
        if (required && s.kind() != *required) {
            parse_error(where, "state \"" + name + "\" is a " + to_string(s.kind()) + ", not a " +
                                   to_string(*required));
        }
        return s;
    };
    if (kind == "vector") {
        expect(2);
        return GeneralizedValuation::from_state(state_of(w[1], QuantumState::Kind::Vector), mode);
    }
    if (kind == "density") {
        expect(2);
        return GeneralizedValuation::from_state(state_of(w[1], QuantumState::Kind::Density), mode);
    }
    if (kind == "projector") {
        expect(2);
        return GeneralizedValuation::from_state(state_of(w[1], QuantumState::Kind::Projector), mode);
    }
    if (kind == "state") {
        expect(2);
        return GeneralizedValuation::from_state(state_of(w[1], std::nullopt), mode);
    }
    if (kind == "threshold") {
        expect(3);
        return GeneralizedValuation::threshold(state_of(w[1], std::nullopt), number_of(w[2], where), mode);
    }
    if (kind == "partial") {
        expect(3);
        const auto& op = system.op(w[1]).op;
        return GeneralizedValuation::from_partial(PartialValuation::maximal(op, eigen_index_of(op, w[2], where)),
                                                  mode);
    }
    parse_error(where, "unknown valuation kind \"" + kind + "\"");
}

std::string format_real(double x)
{
    double snapped = std::round(x * 1e9) / 1e9;
    if (snapped == 0.0) {
        snapped = 0.0;  // drops the sign of -0
    }
    std::ostringstream os;
    os.precision(10);
    os << snapped;
    return os.str();
}

std::string partition_label(const Partition& p, const std::vector<double>& eigenvalues)
{
    std::string out = "{";
    for (std::size_t b = 0; b < p.blocks().size(); ++b) {
        out += b ? ",{" : "{";
        const auto& block = p.blocks()[b];
        for (std::size_t i = 0; i < block.size(); ++i) {
            out += (i ? "," : "") + format_real(eigenvalues.at(block[i]));
        }
        out += "}";
    }
    return out + "}";
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Parse, path + ": cannot open file");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace qsieve
