#include "modfix/config.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace modfix {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ParameterError(path + ": " + message);
}

const json& require_field(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) {
        fail(path + "." + key, "field is required");
    }
    return j.at(key);
}

double read_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    return j.get<double>();
}

std::string read_string(const json& j, const std::string& path) {
    if (!j.is_string()) {
        fail(path, "expected a string");
    }
    return j.get<std::string>();
}

bool read_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) {
        fail(path, "expected a boolean");
    }
    return j.get<bool>();
}

std::vector<double> read_number_array(const json& j, const std::string& path) {
    if (!j.is_array()) {
        fail(path, "expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_number()) {
            fail(path, "expected an array of numbers");
        }
        out.push_back(item.get<double>());
    }
    return out;
}

// A single number broadcasts across the grid.
FnVec read_fnvec(const json& j, std::size_t grid_size, const std::string& path) {
    if (j.is_number()) {
        return FnVec::constant(grid_size, j.get<double>());
    }
    std::vector<double> values = read_number_array(j, path);
    if (values.size() != grid_size) {
        fail(path, "expected " + std::to_string(grid_size) + " values, got " +
                       std::to_string(values.size()));
    }
    return FnVec(std::move(values));
}

MeasureGrid read_space(const json& j, const std::string& path) {
    if (j.is_string()) {
        if (j.get<std::string>() == "scalar") {
            return MeasureGrid::scalar();
        }
        fail(path, "expected \"scalar\" or an object with points/weights");
    }
    if (!j.is_object()) {
        fail(path, "expected \"scalar\" or an object with points/weights");
    }
    std::vector<double> weights = read_number_array(require_field(j, "weights", path), path + ".weights");
    std::vector<double> points;
    if (j.contains("points")) {
        points = read_number_array(j.at("points"), path + ".points");
    } else {
        points.resize(weights.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            points[i] = static_cast<double>(i);
        }
    }
    try {
        return MeasureGrid(std::move(points), std::move(weights));
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

ModularFn read_modular(const json& j, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected an object with a kind field");
    }
    const std::string kind = read_string(require_field(j, "kind", path), path + ".kind");
    try {
        if (kind == "absolute") {
            return ModularFn::absolute();
        }
        if (kind == "power") {
            return ModularFn::power(read_number(require_field(j, "p", path), path + ".p"));
        }
        if (kind == "orlicz") {
            ExprAst phi = parse_expr(
                read_string(require_field(j, "phi", path), path + ".phi"), "t");
            const bool convex =
                j.contains("convex") ? read_bool(j.at("convex"), path + ".convex") : false;
            const bool delta2 =
                j.contains("delta2") ? read_bool(j.at("delta2"), path + ".delta2") : false;
            const bool uuc1 = j.contains("uuc1") ? read_bool(j.at("uuc1"), path + ".uuc1") : false;
            return ModularFn::orlicz(std::move(phi), convex, delta2, uuc1);
        }
    } catch (const ParameterError& e) {
        fail(path, e.what());
    } catch (const ParseError& e) {
        fail(path + ".phi", e.what());
    }
    fail(path + ".kind", "expected absolute, power or orlicz");
}

MappingSpec read_mapping(const json& j, std::size_t, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected an object (affine, expression or compose)");
    }
    try {
        if (j.contains("affine")) {
            const json& aff = j.at("affine");
            return MappingSpec::affine(
                read_number(require_field(aff, "a", path + ".affine"), path + ".affine.a"),
                read_number(require_field(aff, "b", path + ".affine"), path + ".affine.b"));
        }
        if (j.contains("expression")) {
            return MappingSpec::expression(
                parse_expr(read_string(j.at("expression"), path + ".expression"), "f"));
        }
        if (j.contains("compose")) {
            const json& stages = j.at("compose");
            if (!stages.is_array() || stages.empty()) {
                fail(path + ".compose", "expected a nonempty array of mappings");
            }
            std::vector<MappingSpec> parts;
            parts.reserve(stages.size());
            for (std::size_t i = 0; i < stages.size(); ++i) {
                parts.push_back(
                    read_mapping(stages[i], 0, path + ".compose[" + std::to_string(i) + "]"));
            }
            return MappingSpec::compose(std::move(parts));
        }
    } catch (const ParseError& e) {
        fail(path + ".expression", e.what());
    }
    fail(path, "expected one of affine, expression or compose");
}

StepSequence read_steps(const json& j, const std::string& path) {
    try {
        if (j.is_number()) {
            return StepSequence::constant(j.get<double>());
        }
        if (j.is_array()) {
            return StepSequence::table(read_number_array(j, path));
        }
    } catch (const ParameterError& e) {
        fail(path, e.what());
    }
    fail(path, "expected a number or an array of numbers in (0,1)");
}

SchemeEntry read_scheme(const json& j, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected a scheme object");
    }
    SchemeEntry entry;
    if (j.contains("kind")) {
        try {
            entry.kind = scheme_from_string(read_string(j.at("kind"), path + ".kind"));
        } catch (const ParameterError& e) {
            fail(path + ".kind", e.what());
        }
    }
    if (j.contains("alpha")) {
        entry.alpha = read_steps(j.at("alpha"), path + ".alpha");
    }
    if (j.contains("beta")) {
        entry.beta = read_steps(j.at("beta"), path + ".beta");
    }
    if (j.contains("name")) {
        entry.name = read_string(j.at("name"), path + ".name");
    }
    if (entry.kind == SchemeKind::ishikawa && !entry.beta) {
        fail(path, "ishikawa requires a beta step sequence");
    }
    return entry;
}

StopSpec read_stop(const json& j, std::size_t grid_size, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected a stop-rule object");
    }
    StopSpec stop;
    const std::string kind = read_string(require_field(j, "kind", path), path + ".kind");
    if (kind == "to-fixed-point") {
        stop.kind = StopRule::Kind::residual_to_fixed_point;
        stop.w = read_fnvec(require_field(j, "w", path), grid_size, path + ".w");
    } else if (kind == "self-residual") {
        stop.kind = StopRule::Kind::self_residual;
    } else if (kind == "step-residual") {
        stop.kind = StopRule::Kind::step_residual;
    } else {
        fail(path + ".kind", "expected to-fixed-point, self-residual or step-residual");
    }
    if (j.contains("tol")) {
        stop.tol = read_number(j.at("tol"), path + ".tol");
    }
    if (!(stop.tol > 0.0)) {
        fail(path + ".tol", "must be > 0");
    }
    if (j.contains("max_iter")) {
        const json& m = j.at("max_iter");
        if (!m.is_number_unsigned() || m.get<std::uint64_t>() < 1) {
            fail(path + ".max_iter", "must be an integer >= 1");
        }
        stop.max_iter = m.get<std::size_t>();
    }
    return stop;
}

CheckSpec read_check(const json& j, std::size_t grid_size, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected a check object");
    }
    CheckSpec check;
    check.kind = read_string(require_field(j, "class", path), path + ".class");
    if (j.contains("lambda")) {
        check.lambda = read_number(j.at("lambda"), path + ".lambda");
    }
    if (j.contains("ell")) {
        check.ell = read_string(j.at("ell"), path + ".ell");
    }
    if (j.contains("fixed_points")) {
        const json& fps = j.at("fixed_points");
        if (!fps.is_array()) {
            fail(path + ".fixed_points", "expected an array");
        }
        for (std::size_t i = 0; i < fps.size(); ++i) {
            check.fixed_points.push_back(read_fnvec(
                fps[i], grid_size, path + ".fixed_points[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("count")) {
        const json& c = j.at("count");
        if (!c.is_number_unsigned() || c.get<std::uint64_t>() < 1) {
            fail(path + ".count", "must be an integer >= 1");
        }
        check.count = c.get<std::size_t>();
    }
    if (j.contains("check_ell_monotone")) {
        check.check_ell_monotone = read_bool(j.at("check_ell_monotone"), path + ".check_ell_monotone");
    }
    return check;
}

}  // namespace

StopRule StopSpec::build() const {
    switch (kind) {
        case StopRule::Kind::residual_to_fixed_point:
            return StopRule::to_fixed_point(*w, tol, max_iter);
        case StopRule::Kind::self_residual:
            return StopRule::self_residual(tol, max_iter);
        case StopRule::Kind::step_residual:
            return StopRule::step_residual(tol, max_iter);
    }
    throw ParameterError("stop: unknown kind");
}

ExperimentConfig load_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ParameterError("config: expected a JSON object");
    }

    ExperimentConfig cfg;
    if (j.contains("space")) {
        cfg.grid = read_space(j.at("space"), "space");
    }
    const std::size_t n = cfg.grid.size();
    if (j.contains("modular")) {
        cfg.modular = read_modular(j.at("modular"), "modular");
    }
    if (j.contains("domain")) {
        const json& d = j.at("domain");
        if (!d.is_object()) {
            fail("domain", "expected an object with lower/upper");
        }
        try {
            cfg.domain = DomainBox(read_fnvec(require_field(d, "lower", "domain"), n, "domain.lower"),
                                   read_fnvec(require_field(d, "upper", "domain"), n, "domain.upper"));
        } catch (const ParameterError& e) {
            throw ParameterError(std::string("domain: ") + e.what());
        }
    }
    if (j.contains("mapping")) {
        cfg.mapping = read_mapping(j.at("mapping"), n, "mapping");
    }
    if (j.contains("scheme")) {
        cfg.scheme = read_scheme(j.at("scheme"), "scheme");
    }
    if (j.contains("schemes")) {
        const json& list = j.at("schemes");
        if (!list.is_array() || list.empty()) {
            fail("schemes", "expected a nonempty array of schemes");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            cfg.schemes.push_back(read_scheme(list[i], "schemes[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("alpha_sweep")) {
        cfg.alpha_sweep = read_number_array(j.at("alpha_sweep"), "alpha_sweep");
        for (double a : cfg.alpha_sweep) {
            if (!(a > 0.0 && a < 1.0)) {
                fail("alpha_sweep", "entries must lie strictly inside (0,1)");
            }
        }
    }
    if (j.contains("stop")) {
        cfg.stop = read_stop(j.at("stop"), n, "stop");
    }
    if (j.contains("start")) {
        cfg.start = read_fnvec(j.at("start"), n, "start");
    }
    if (j.contains("f")) {
        cfg.norm_input = read_fnvec(j.at("f"), n, "f");
    }
    if (j.contains("check")) {
        cfg.check = read_check(j.at("check"), n, "check");
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        if (!o.is_object()) {
            fail("output", "expected an object with format/path");
        }
        if (o.contains("format")) {
            try {
                cfg.output.format =
                    output_format_from_string(read_string(o.at("format"), "output.format"));
            } catch (const ParameterError& e) {
                fail("output.format", e.what());
            }
        }
        if (o.contains("path")) {
            cfg.output.path = read_string(o.at("path"), "output.path");
        }
    }
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_unsigned()) {
            fail("seed", "must be a nonnegative integer");
        }
        cfg.seed = s.get<std::uint64_t>();
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_config_text(buffer.str());
}

}  // namespace modfix
