#include "eulerps/config.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace eulerps {

using nlohmann::json;

namespace {

double get_number(const json& j, const std::string& path, const std::string& key, double fallback,
                  bool required = false) {
    if (!j.contains(key)) {
        if (required) throw ParseError(path + "." + key + ": missing required field");
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number()) throw ParseError(path + "." + key + ": expected a number");
    return v.get<double>();
}

int get_int(const json& j, const std::string& path, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ParseError(path + "." + key + ": expected an integer");
    return v.get<int>();
}

GasState parse_state(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected an object with rho/u/p");
    GasState s;
    s.rho = get_number(j, path, "rho", 0.0, true);
    s.u = get_number(j, path, "u", 0.0, true);
    s.p = get_number(j, path, "p", 0.0, true);
    if (!(s.rho > 0.0)) throw ValidationError(path + ".rho: rho > 0 required");
    if (!(s.p > 0.0)) throw ValidationError(path + ".p: p > 0 required");
    if (!std::isfinite(s.u)) throw ValidationError(path + ".u: finite velocity required");
    return s;
}

json state_json(const GasState& s) { return json{{"rho", s.rho}, {"u", s.u}, {"p", s.p}}; }

}  // namespace

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ProblemConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config: top-level object expected");

    ProblemConfig c;
    c.model.gamma = get_number(doc, "config", "gamma", 1.4);
    if (!(c.model.gamma > 1.0)) throw ValidationError("gamma: gamma > 1 required");

    if (!doc.contains("left") || !doc.contains("right"))
        throw ParseError("config: left and right states are required");
    c.left = parse_state(doc.at("left"), "left");
    c.right = parse_state(doc.at("right"), "right");

    if (doc.contains("source")) {
        const json& s = doc.at("source");
        c.source.k1 = get_number(s, "source", "k1", 0.0);
        c.source.k2 = get_number(s, "source", "k2", 0.0);
        c.source.k3 = get_number(s, "source", "k3", 0.0);
        if (!(c.source.k1 > -1.0)) throw ValidationError("source.k1: k1 > -1 required");
        if (!(c.source.k2 > -1.0)) throw ValidationError("source.k2: k2 > -1 required");
        if (!(c.source.k3 > -1.0)) throw ValidationError("source.k3: k3 > -1 required");
    }

    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        c.solver.root_tol = get_number(s, "solver", "root_tol", c.solver.root_tol);
        c.solver.max_iter = get_int(s, "solver", "max_iter", c.solver.max_iter);
        c.solver.sonic_tol = get_number(s, "solver", "sonic_tol", c.solver.sonic_tol);
        c.solver.residual_tol = get_number(s, "solver", "residual_tol", c.solver.residual_tol);
        if (!(c.solver.root_tol > 0.0)) throw ValidationError("solver.root_tol: positive value required");
        if (!(c.solver.max_iter > 0)) throw ValidationError("solver.max_iter: positive value required");
        if (!(c.solver.sonic_tol > 0.0)) throw ValidationError("solver.sonic_tol: positive value required");
        if (!(c.solver.residual_tol > 0.0))
            throw ValidationError("solver.residual_tol: positive value required");
    }

    if (doc.contains("sampling")) {
        const json& s = doc.at("sampling");
        if (s.contains("time")) {
            const double t = get_number(s, "sampling", "time", 0.0, true);
            if (!(t > 0.0)) throw ValidationError("sampling.time: positive time required");
            c.sampling.time = t;
            const double x_min = get_number(s, "sampling", "x_min", -1.0);
            const double x_max = get_number(s, "sampling", "x_max", 1.0);
            c.sampling.xi_min = x_min / t;
            c.sampling.xi_max = x_max / t;
        } else {
            c.sampling.xi_min = get_number(s, "sampling", "xi_min", c.sampling.xi_min);
            c.sampling.xi_max = get_number(s, "sampling", "xi_max", c.sampling.xi_max);
        }
        c.sampling.count = get_int(s, "sampling", "count", c.sampling.count);
        if (c.sampling.count < 2) throw ValidationError("sampling.count: at least 2 rows required");
        if (!(c.sampling.xi_min < c.sampling.xi_max))
            throw ValidationError("sampling: xi_min < xi_max required");
    }

    if (doc.contains("curve")) {
        const json& s = doc.at("curve");
        CurveSpec spec;
        spec.kind = s.contains("kind") ? s.at("kind").get<std::string>() : spec.kind;
        if (spec.kind != "forward" && spec.kind != "backward" && spec.kind != "branch")
            throw ValidationError("curve.kind: one of forward/backward/branch required");
        spec.m_min = get_number(s, "curve", "m_min", spec.m_min);
        spec.m_max = get_number(s, "curve", "m_max", spec.m_max);
        spec.count = get_int(s, "curve", "count", spec.count);
        if (!(spec.m_min > 0.0)) throw ValidationError("curve.m_min: positive Mach required");
        if (!(spec.m_min < spec.m_max)) throw ValidationError("curve: m_min < m_max required");
        if (spec.count < 2) throw ValidationError("curve.count: at least 2 rows required");
        c.curve = spec;
    }

    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        SweepSpec spec;
        spec.ml_min = get_number(s, "sweep", "ml_min", spec.ml_min);
        spec.ml_max = get_number(s, "sweep", "ml_max", spec.ml_max);
        spec.ml_count = get_int(s, "sweep", "ml_count", spec.ml_count);
        spec.mr_min = get_number(s, "sweep", "mr_min", spec.mr_min);
        spec.mr_max = get_number(s, "sweep", "mr_max", spec.mr_max);
        spec.mr_count = get_int(s, "sweep", "mr_count", spec.mr_count);
        if (s.contains("k_values")) {
            if (!s.at("k_values").is_array()) throw ParseError("sweep.k_values: array expected");
            spec.k_values.clear();
            for (const auto& v : s.at("k_values")) {
                if (!v.is_number()) throw ParseError("sweep.k_values: numbers expected");
                spec.k_values.push_back(v.get<double>());
                if (!(spec.k_values.back() > -1.0))
                    throw ValidationError("sweep.k_values: k > -1 required");
            }
            if (spec.k_values.empty()) throw ValidationError("sweep.k_values: nonempty list required");
        }
        spec.rho_left = get_number(s, "sweep", "rho_left", spec.rho_left);
        spec.p_left = get_number(s, "sweep", "p_left", spec.p_left);
        spec.rho_right = get_number(s, "sweep", "rho_right", spec.rho_right);
        spec.p_right = get_number(s, "sweep", "p_right", spec.p_right);
        spec.workers = get_int(s, "sweep", "workers", spec.workers);
        if (spec.ml_count < 1 || spec.mr_count < 1)
            throw ValidationError("sweep: grid counts must be positive");
        if (!(spec.rho_left > 0.0) || !(spec.p_left > 0.0) || !(spec.rho_right > 0.0) ||
            !(spec.p_right > 0.0))
            throw ValidationError("sweep: positive shape densities and pressures required");
        if (spec.workers < 1) throw ValidationError("sweep.workers: at least one worker required");
        c.sweep = spec;
    }
    return c;
}

std::string emit_config(const ProblemConfig& c) {
    json doc;
    doc["gamma"] = c.model.gamma;
    doc["left"] = state_json(c.left);
    doc["right"] = state_json(c.right);
    doc["source"] = json{{"k1", c.source.k1}, {"k2", c.source.k2}, {"k3", c.source.k3}};
    doc["solver"] = json{{"root_tol", c.solver.root_tol},
                         {"max_iter", c.solver.max_iter},
                         {"sonic_tol", c.solver.sonic_tol},
                         {"residual_tol", c.solver.residual_tol}};
    json sampling{{"count", c.sampling.count}};
    if (c.sampling.time) {
        sampling["time"] = *c.sampling.time;
        sampling["x_min"] = c.sampling.xi_min * *c.sampling.time;
        sampling["x_max"] = c.sampling.xi_max * *c.sampling.time;
    } else {
        sampling["xi_min"] = c.sampling.xi_min;
        sampling["xi_max"] = c.sampling.xi_max;
    }
    doc["sampling"] = sampling;
    if (c.curve) {
        doc["curve"] = json{{"kind", c.curve->kind},
                            {"m_min", c.curve->m_min},
                            {"m_max", c.curve->m_max},
                            {"count", c.curve->count}};
    }
    if (c.sweep) {
        doc["sweep"] = json{{"ml_min", c.sweep->ml_min},   {"ml_max", c.sweep->ml_max},
                            {"ml_count", c.sweep->ml_count}, {"mr_min", c.sweep->mr_min},
                            {"mr_max", c.sweep->mr_max},   {"mr_count", c.sweep->mr_count},
                            {"k_values", c.sweep->k_values}, {"rho_left", c.sweep->rho_left},
                            {"p_left", c.sweep->p_left},   {"rho_right", c.sweep->rho_right},
                            {"p_right", c.sweep->p_right}, {"workers", c.sweep->workers}};
    }
    return doc.dump(2) + "\n";
}

bool operator==(const ProblemConfig& a, const ProblemConfig& b) {
    auto state_eq = [](const GasState& x, const GasState& y) {
        return x.rho == y.rho && x.u == y.u && x.p == y.p;
    };
    bool eq = a.model.gamma == b.model.gamma && state_eq(a.left, b.left) &&
              state_eq(a.right, b.right) && a.source.k1 == b.source.k1 &&
              a.source.k2 == b.source.k2 && a.source.k3 == b.source.k3 &&
              a.solver.root_tol == b.solver.root_tol && a.solver.max_iter == b.solver.max_iter &&
              a.solver.sonic_tol == b.solver.sonic_tol &&
              a.solver.residual_tol == b.solver.residual_tol &&
              a.sampling.xi_min == b.sampling.xi_min && a.sampling.xi_max == b.sampling.xi_max &&
              a.sampling.count == b.sampling.count &&
              a.sampling.time.has_value() == b.sampling.time.has_value() &&
              a.curve.has_value() == b.curve.has_value() &&
              a.sweep.has_value() == b.sweep.has_value();
    if (!eq) return false;
    if (a.sampling.time && *a.sampling.time != *b.sampling.time) return false;
    if (a.curve) {
        eq = a.curve->kind == b.curve->kind && a.curve->m_min == b.curve->m_min &&
             a.curve->m_max == b.curve->m_max && a.curve->count == b.curve->count;
        if (!eq) return false;
    }
    if (a.sweep) {
        eq = a.sweep->ml_min == b.sweep->ml_min && a.sweep->ml_max == b.sweep->ml_max &&
             a.sweep->ml_count == b.sweep->ml_count && a.sweep->mr_min == b.sweep->mr_min &&
             a.sweep->mr_max == b.sweep->mr_max && a.sweep->mr_count == b.sweep->mr_count &&
             a.sweep->k_values == b.sweep->k_values && a.sweep->rho_left == b.sweep->rho_left &&
             a.sweep->p_left == b.sweep->p_left && a.sweep->rho_right == b.sweep->rho_right &&
             a.sweep->p_right == b.sweep->p_right && a.sweep->workers == b.sweep->workers;
        if (!eq) return false;
    }
    return true;
}

}  // namespace eulerps
