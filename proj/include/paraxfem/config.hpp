#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bottom_profile.hpp"

namespace paraxfem {

/// Configuration error with the offending line number.
struct ConfigError : std::runtime_error {
    ConfigError(int line, const std::string& what)
        : std::runtime_error("config line " + std::to_string(line) + ": " + what), line_no(line) {}
    int line_no;
};

enum class Experiment { Converge, Wedge, Growth, Solve };
enum class ModelKind { N, AK, IFDP, ParabolicDissipative, ParabolicReactive };

/// Validated description of one batch run.
struct RunConfig {
    Experiment experiment = Experiment::Converge;
    ModelKind model = ModelKind::N;

    // converge
    int case_id = 1;
    std::vector<std::size_t> levels;

    // wedge
    bool upsloping = true;
    double h = 1.0 / 1000.0;
    std::size_t steps = 1000;
    std::optional<double> depth_m;

    // growth / solve
    char profile_id = 'b';
    std::size_t level = 500;
    double T = 1.0;

    std::vector<std::string> annotations;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct KeyValue {
    std::string value;
    int line = 0;
    bool used = false;
};

} // namespace detail

/// Parse the sectioned key=value run description. Unknown keys and
/// invalid values are rejected with line-anchored diagnostics.
inline RunConfig parse_config(const std::string& text) {
    std::map<std::string, detail::KeyValue> kv;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(line_no, "unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "run")
                throw ConfigError(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, "expected key = value");
        if (section.empty())
            throw ConfigError(line_no, "key outside a [run] section");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (kv.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
        kv[key] = {value, line_no, false};
    }

    auto take = [&](const std::string& key) -> detail::KeyValue* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    };
    auto require = [&](const std::string& key) -> detail::KeyValue& {
        auto* p = take(key);
        if (!p) throw ConfigError(0, "missing required key '" + key + "'");
        return *p;
    };
    auto parse_double = [&](detail::KeyValue& f, const std::string& key) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(f.value, &pos);
            if (pos != f.value.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError(f.line, "invalid number for '" + key + "'");
        }
    };
    auto parse_size = [&](detail::KeyValue& f, const std::string& key) {
        const double v = parse_double(f, key);
        if (v < 1.0 || v != std::floor(v))
            throw ConfigError(f.line, "'" + key + "' must be a positive integer");
        return static_cast<std::size_t>(v);
    };

    RunConfig cfg;
    {
        auto& f = require("experiment");
        if (f.value == "converge") cfg.experiment = Experiment::Converge;
        else if (f.value == "wedge") cfg.experiment = Experiment::Wedge;
        else if (f.value == "growth") cfg.experiment = Experiment::Growth;
        else if (f.value == "solve") cfg.experiment = Experiment::Solve;
        else throw ConfigError(f.line, "unknown experiment '" + f.value + "'");
    }
    if (auto* f = take("model")) {
        if (f->value == "N") cfg.model = ModelKind::N;
        else if (f->value == "AK") cfg.model = ModelKind::AK;
        else if (f->value == "IFDP") cfg.model = ModelKind::IFDP;
        else if (f->value == "parabolic-dissipative") cfg.model = ModelKind::ParabolicDissipative;
        else if (f->value == "parabolic-reactive") cfg.model = ModelKind::ParabolicReactive;
        else throw ConfigError(f->line, "unknown model '" + f->value + "'");
    }

    switch (cfg.experiment) {
        case Experiment::Converge: {
            if (auto* f = take("case")) {
                const double v = parse_double(*f, "case");
                if (v != 1 && v != 2 && v != 3)
                    throw ConfigError(f->line, "case must be 1, 2 or 3");
                cfg.case_id = static_cast<int>(v);
            }
            auto& f = require("levels");
            std::istringstream ls(f.value);
            std::string tok;
            while (std::getline(ls, tok, ',')) {
                tok = detail::trim(tok);
                detail::KeyValue tmp{tok, f.line, true};
                const std::size_t lev = parse_size(tmp, "levels");
                if (lev != 100 && lev != 200 && lev != 400 && lev != 800)
                    throw ConfigError(f.line, "levels must be among 100,200,400,800");
                cfg.levels.push_back(lev);
            }
            if (cfg.levels.empty()) throw ConfigError(f.line, "levels is empty");
            if (cfg.model != ModelKind::N && cfg.model != ModelKind::AK)
                throw ConfigError(0, "converge supports models N and AK");
            break;
        }
        case Experiment::Wedge: {
            auto& d = require("direction");
            if (d.value == "up") cfg.upsloping = true;
            else if (d.value == "down") cfg.upsloping = false;
            else throw ConfigError(d.line, "direction must be up or down");
            if (auto* f = take("h")) {
                cfg.h = parse_double(*f, "h");
                if (!(cfg.h > 0.0)) throw ConfigError(f->line, "h must be positive");
                if (cfg.h > 0.5) throw ConfigError(f->line, "h must be at most 1/2");
            }
            if (auto* f = take("steps")) cfg.steps = parse_size(*f, "steps");
            if (auto* f = take("depth_m")) {
                const double v = parse_double(*f, "depth_m");
                if (!(v > 0.0)) throw ConfigError(f->line, "depth_m must be positive");
                cfg.depth_m = v;
            }
            if (cfg.model == ModelKind::ParabolicDissipative ||
                cfg.model == ModelKind::ParabolicReactive)
                throw ConfigError(0, "wedge supports models N, AK and IFDP");
            if (cfg.model == ModelKind::N && !cfg.upsloping)
                cfg.annotations.push_back("analysis requires upsloping");
            break;
        }
        case Experiment::Growth: {
            auto& f = require("profile");
            if (f.value.size() != 1 || f.value[0] < 'a' || f.value[0] > 'h')
                throw ConfigError(f.line, "profile must be one of a..h");
            cfg.profile_id = f.value[0];
            if (auto* g = take("level")) cfg.level = parse_size(*g, "level");
            break;
        }
        case Experiment::Solve: {
            if (auto* f = take("h")) {
                cfg.h = parse_double(*f, "h");
                if (!(cfg.h > 0.0)) throw ConfigError(f->line, "h must be positive");
                if (cfg.h > 0.5) throw ConfigError(f->line, "h must be at most 1/2");
            }
            if (auto* f = take("steps")) cfg.steps = parse_size(*f, "steps");
            if (auto* f = take("T")) {
                cfg.T = parse_double(*f, "T");
                if (!(cfg.T > 0.0)) throw ConfigError(f->line, "T must be positive");
            }
            if (auto* f = take("profile")) {
                if (f->value.size() != 1 || f->value[0] < 'a' || f->value[0] > 'h')
                    throw ConfigError(f->line, "profile must be one of a..h");
                cfg.profile_id = f->value[0];
            }
            if ((cfg.model == ModelKind::N || cfg.model == ModelKind::AK) &&
                !is_upsloping(growth_profile(cfg.profile_id), cfg.T))
                cfg.annotations.push_back("analysis requires upsloping");
            break;
        }
    }

    for (const auto& [key, field] : kv)
        if (!field.used)
            throw ConfigError(field.line, "unknown key '" + key + "'");
    return cfg;
}

} // namespace paraxfem
