#include "bhmc/config.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "bhmc/errors.hpp"

namespace bhmc::cli {

using nlohmann::json;

const char* to_string(Baseline b) noexcept {
    switch (b) {
        case Baseline::lbcl_direct: return "lbcl_direct";
        case Baseline::bright_taylor: return "bright_taylor";
        case Baseline::brute_force: return "brute_force";
    }
    return "unknown";
}

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
    for (const auto& [key, _] : obj.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

const json& require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    return j;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + " must be a number");
    return j.get<double>();
}

std::size_t count(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ConfigError(where + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

Vector vector_of(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + " must be an array of numbers");
    Vector v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

Matrix matrix_of(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a nonempty array of rows");
    Matrix m;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Vector row = vector_of(j[i], where + "[" + std::to_string(i) + "]");
        if (i == 0) m = Matrix(j.size(), row.size());
        if (row.size() != m.cols() || row.empty())
            throw ConfigError(where + " has ragged or empty rows");
        for (std::size_t c = 0; c < row.size(); ++c) m(i, c) = row[c];
    }
    return m;
}

models::ModelSpec parse_catalog(const json& model) {
    reject_unknown(model, "model", {"catalog", "params"});
    if (!model["catalog"].is_string()) throw ConfigError("model.catalog must be a string");
    models::ModelSpec spec;
    spec.id = models::model_id_from_string(model["catalog"].get<std::string>());
    if (model.contains("params")) {
        for (const auto& [key, value] : require_object(model["params"], "model.params").items())
            spec.params[key] = number(value, "model.params." + key);
    }
    return spec;
}

BlockTable parse_blocks(const json& model) {
    reject_unknown(model, "model", {"blocks"});
    const json& blocks = require_object(model["blocks"], "model.blocks");
    reject_unknown(blocks, "model.blocks", {"levels"});
    if (!blocks.contains("levels") || !blocks["levels"].is_array() || blocks["levels"].empty())
        throw ConfigError("model.blocks.levels must be a nonempty array");
    BlockTable table;
    const json& levels = blocks["levels"];
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const std::string where = "model.blocks.levels[" + std::to_string(k) + "]";
        std::vector<std::pair<int, Matrix>> row;
        for (const auto& [key, value] : require_object(levels[k], where).items()) {
            int offset = 0;
            std::istringstream in(key);
            if (!(in >> offset) || !in.eof()) throw ConfigError(where + ": offset '" + key + "' is not an integer");
            if (offset < -1) throw ConfigError(where + ": offset " + key + " is below -1");
            if (offset == -1 && k == 0) throw ConfigError(where + ": level 0 has no block below it");
            row.emplace_back(offset, matrix_of(value, where + "." + key));
        }
        std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        if (row.empty() || std::none_of(row.begin(), row.end(), [](const auto& p) { return p.first == 0; }))
            throw ConfigError(where + " needs the diagonal block \"0\"");
        table.levels.push_back(std::move(row));
    }
    if (table.levels.size() > 1 &&
        std::none_of(table.levels.back().begin(), table.levels.back().end(),
                     [](const auto& p) { return p.first == -1; }))
        throw ConfigError("the repeating last level needs a \"-1\" block");
    return table;
}

DriftSpec parse_drift(const json& j) {
    require_object(j, "solver.drift");
    reject_unknown(j, "solver.drift", {"v", "b", "C"});
    DriftSpec spec;
    if (!j.contains("v")) throw ConfigError("solver.drift.v is required");
    const json& v = require_object(j["v"], "solver.drift.v");
    reject_unknown(v, "solver.drift.v", {"linear", "table"});
    if (v.contains("linear") == v.contains("table"))
        throw ConfigError("solver.drift.v needs exactly one of 'linear' or 'table'");
    if (v.contains("linear")) {
        const Vector ab = vector_of(v["linear"], "solver.drift.v.linear");
        if (ab.size() != 2) throw ConfigError("solver.drift.v.linear must be [a, b]");
        spec.linear = std::make_pair(ab[0], ab[1]);
    } else {
        if (!v["table"].is_array() || v["table"].empty())
            throw ConfigError("solver.drift.v.table must be a nonempty array");
        for (std::size_t k = 0; k < v["table"].size(); ++k)
            spec.table.push_back(vector_of(v["table"][k], "solver.drift.v.table[" + std::to_string(k) + "]"));
    }
    if (j.contains("b")) spec.b = number(j["b"], "solver.drift.b");
    if (j.contains("C")) {
        if (!j["C"].is_array()) throw ConfigError("solver.drift.C must be an array of [level, phase]");
        for (const auto& entry : j["C"]) {
            if (!entry.is_array() || entry.size() != 2) throw ConfigError("solver.drift.C entries are [level, phase]");
            const std::size_t phase = count(entry[1], "solver.drift.C phase");
            if (phase == 0) throw ConfigError("solver.drift.C phases are 1-based");
            spec.C.emplace_back(count(entry[0], "solver.drift.C level"), phase - 1);
        }
    }
    return spec;
}

void parse_solver(const json& j, RunConfig& cfg) {
    require_object(j, "solver");
    reject_unknown(j, "solver", {"variant", "epsilon", "k_set", "max_level", "schedule", "exec",
                                 "drift", "varpi", "varpi_from_level", "trace_capacity"});
    SolverOptions& o = cfg.solver;
    if (j.contains("variant")) {
        if (!j["variant"].is_string()) throw ConfigError("solver.variant must be a string");
        const auto name = j["variant"].get<std::string>();
        if (name == "mip_new") o.variant = Variant::mip_new;
        else if (name == "mip_drift") o.variant = Variant::mip_drift;
        else if (name == "fixed_direction") o.variant = Variant::fixed_direction;
        else throw ConfigError("unknown solver.variant '" + name + "'");
    }
    if (j.contains("epsilon")) o.epsilon = number(j["epsilon"], "solver.epsilon");
    if (j.contains("k_set")) {
        if (!j["k_set"].is_array()) throw ConfigError("solver.k_set must be an array");
        o.K_set.clear();
        for (const auto& k : j["k_set"]) o.K_set.push_back(count(k, "solver.k_set entry"));
    }
    if (j.contains("max_level")) o.max_level = count(j["max_level"], "solver.max_level");
    if (j.contains("schedule")) {
        if (!j["schedule"].is_string()) throw ConfigError("solver.schedule must be a string");
        o.schedule = parse_schedule(j["schedule"].get<std::string>());
    }
    if (j.contains("exec")) {
        const auto e = j["exec"].is_string() ? j["exec"].get<std::string>() : "";
        if (e == "serial") o.exec = kernels::Exec::serial;
        else if (e == "parallel") o.exec = kernels::Exec::parallel;
        else throw ConfigError("solver.exec must be \"serial\" or \"parallel\"");
    }
    if (j.contains("trace_capacity")) o.trace_capacity = count(j["trace_capacity"], "solver.trace_capacity");
    if (j.contains("drift")) cfg.drift = parse_drift(j["drift"]);
    if (j.contains("varpi")) {
        FixedDirection d;
        d.varpi = vector_of(j["varpi"], "solver.varpi");
        if (j.contains("varpi_from_level")) d.from_level = count(j["varpi_from_level"], "solver.varpi_from_level");
        cfg.direction = std::move(d);
    } else if (j.contains("varpi_from_level")) {
        throw ConfigError("solver.varpi_from_level given without solver.varpi");
    }
}

}  // namespace

Schedule parse_schedule(const std::string& text) {
    Schedule s;
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (kind == "every" && arg.empty()) {
            s.kind = Schedule::Kind::every;
        } else if (kind == "stride" && !arg.empty()) {
            std::size_t pos = 0;
            const long long v = std::stoll(arg, &pos);
            if (pos != arg.size() || v < 1) throw ConfigError("schedule stride must be a positive integer");
            s.kind = Schedule::Kind::stride;
            s.stride = static_cast<std::size_t>(v);
        } else if (kind == "geometric" && !arg.empty()) {
            std::size_t pos = 0;
            s.factor = std::stod(arg, &pos);
            if (pos != arg.size()) throw ConfigError("bad geometric factor");
            s.kind = Schedule::Kind::geometric;
        } else {
            throw ConfigError("schedule must be 'every', 'stride:S' or 'geometric:G', got '" + text + "'");
        }
    } catch (const std::logic_error&) {
        throw ConfigError("cannot parse schedule '" + text + "'");
    }
    return s;
}

std::vector<std::size_t> parse_k_set(const std::string& text) {
    std::vector<std::size_t> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t pos = 0;
        long long v = -1;
        try {
            v = std::stoll(item, &pos);
        } catch (const std::logic_error&) {
            pos = 0;
        }
        if (pos != item.size() || v < 0) throw ConfigError("k-set entry '" + item + "' is not a nonnegative integer");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw ConfigError("k-set is empty");
    return out;
}

RunConfig parse_config(const json& doc) {
    require_object(doc, "configuration");
    reject_unknown(doc, "configuration", {"model", "solver", "compare", "compare_options", "output", "validate"});
    RunConfig cfg;
    cfg.source = doc;

    if (!doc.contains("model")) throw ConfigError("configuration needs a 'model' section");
    const json& model = require_object(doc["model"], "model");
    const bool has_catalog = model.contains("catalog");
    const bool has_blocks = model.contains("blocks");
    if (has_catalog == has_blocks) throw ConfigError("model needs exactly one of 'catalog' or 'blocks'");
    if (has_catalog) cfg.catalog = parse_catalog(model);
    else cfg.blocks = parse_blocks(model);

    if (doc.contains("solver")) parse_solver(doc["solver"], cfg);

    if (doc.contains("compare")) {
        if (!doc["compare"].is_array()) throw ConfigError("compare must be an array");
        std::set<std::string> seen;
        for (const auto& item : doc["compare"]) {
            const auto name = item.is_string() ? item.get<std::string>() : "";
            if (!seen.insert(name).second) throw ConfigError("compare lists '" + name + "' twice");
            if (name == "lbcl_direct") cfg.compare.push_back(Baseline::lbcl_direct);
            else if (name == "bright_taylor") cfg.compare.push_back(Baseline::bright_taylor);
            else if (name == "brute_force") cfg.compare.push_back(Baseline::brute_force);
            else throw ConfigError("unknown baseline '" + name + "' in compare");
        }
    }
    if (doc.contains("compare_options")) {
        const json& c = require_object(doc["compare_options"], "compare_options");
        reject_unknown(c, "compare_options", {"depth_factor", "weight"});
        if (c.contains("depth_factor")) {
            cfg.compare_depth_factor = number(c["depth_factor"], "compare_options.depth_factor");
            if (!(cfg.compare_depth_factor >= 1.0)) throw ConfigError("compare_options.depth_factor must be >= 1");
        }
        if (c.contains("weight")) {
            const auto w = c["weight"].is_string() ? c["weight"].get<std::string>() : "";
            if (w == "unit") cfg.level_weighted_tv = false;
            else if (w == "level") cfg.level_weighted_tv = true;
            else throw ConfigError("compare_options.weight must be \"unit\" or \"level\"");
        }
    }
    if (doc.contains("output")) {
        const json& out = require_object(doc["output"], "output");
        reject_unknown(out, "output", {"distribution", "report"});
        for (const char* key : {"distribution", "report"}) {
            if (!out.contains(key)) continue;
            if (!out[key].is_string()) throw ConfigError(std::string("output.") + key + " must be a path string");
            (std::string(key) == "distribution" ? cfg.distribution_path : cfg.report_path) =
                std::filesystem::path(out[key].get<std::string>());
        }
    }
    if (doc.contains("validate")) {
        const json& v = require_object(doc["validate"], "validate");
        reject_unknown(v, "validate", {"levels", "tol"});
        if (v.contains("levels")) cfg.validate_levels = count(v["levels"], "validate.levels");
        if (v.contains("tol")) cfg.validate_tol = number(v["tol"], "validate.tol");
    }

    const Variant variant = cfg.solver.variant;
    if (variant == Variant::mip_drift && !cfg.drift)
        throw ConfigError("variant mip_drift needs solver.drift");
    if (variant == Variant::fixed_direction && !cfg.direction)
        throw ConfigError("variant fixed_direction needs solver.varpi");
    validate_options(cfg.solver);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
    if (o.epsilon) cfg.solver.epsilon = *o.epsilon;
    if (o.k_set) cfg.solver.K_set = parse_k_set(*o.k_set);
    if (o.max_level) cfg.solver.max_level = *o.max_level;
    if (o.schedule) cfg.solver.schedule = parse_schedule(*o.schedule);
    validate_options(cfg.solver);
}

BlockGenerator build_generator(const RunConfig& cfg) {
    if (cfg.catalog) return models::make_model(*cfg.catalog);
    if (!cfg.blocks) throw ConfigError("configuration has no model");

    auto table = std::make_shared<const BlockTable>(*cfg.blocks);
    int band = 0;
    for (const auto& row : table->levels)
        for (const auto& [offset, _] : row) band = std::max(band, offset);
    if (band < 1) throw ConfigError("block table never moves up a level");

    auto row_for = [table](std::size_t k) -> const std::vector<std::pair<int, Matrix>>& {
        return table->levels[std::min(k, table->levels.size() - 1)];
    };
    auto phases = [row_for](std::size_t k) -> std::size_t {
        for (const auto& [offset, m] : row_for(k))
            if (offset == 0) return m.rows();
        return 0;
    };
    auto block = [row_for, phases](std::size_t k, std::size_t l) -> Matrix {
        const int offset = static_cast<int>(l) - static_cast<int>(k);
        for (const auto& [o, m] : row_for(k))
            if (o == offset) return m;
        return Matrix(phases(k), phases(l));
    };
    return BlockGenerator(phases, block, static_cast<std::size_t>(band), {}, "blocks");
}

DriftCertificate build_certificate(const DriftSpec& spec, const BlockGenerator& gen) {
    DriftCertificate cert;
    cert.b = spec.b;
    cert.C = spec.C;
    if (spec.linear) {
        const auto [a, b] = *spec.linear;
        cert.v = [a, b, gen](std::size_t level) {
            return Vector(gen.phase_count(level), a + b * static_cast<double>(level));
        };
    } else {
        auto table = spec.table;
        cert.v = [table](std::size_t level) { return table[std::min(level, table.size() - 1)]; };
    }
    return cert;
}

}  // namespace bhmc::cli
