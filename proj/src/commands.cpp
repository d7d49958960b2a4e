#include "eulerps/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

namespace eulerps {

using nlohmann::json;

namespace {

int report_error(const Error& e, std::ostream& out) {
    json err{{"status", "error"}, {"error", {{"kind", e.kind()}, {"message", e.what()}}}};
    out << err.dump(2) << "\n";
    return static_cast<int>(e.exit_code());
}

json state_json(const GasState& s) {
    return json{{"rho", s.rho}, {"u", s.u}, {"p", s.p}};
}

const char* kind_name(WaveKind k) {
    switch (k) {
        case WaveKind::Shock: return "shock";
        case WaveKind::Rarefaction: return "rarefaction";
        case WaveKind::Contact: return "contact";
    }
    return "?";
}

json waves_json(const std::vector<ClassicalWave>& waves, const char* side) {
    json arr = json::array();
    for (const auto& w : waves) {
        arr.push_back(json{{"side", side},
                           {"family", static_cast<int>(w.family)},
                           {"kind", kind_name(w.kind)},
                           {"speed_lo", w.speed_lo},
                           {"speed_hi", w.speed_hi},
                           {"zero_strength", w.zero_strength}});
    }
    return arr;
}

// The double-branch cases in the solving frame: k > 0 with the upstream input
// at the supersonic sonic pre-image, k < 0 with a choked upstream state.
bool double_branch_case(const SingularSolution& sol, const ProblemConfig& c) {
    if (!sol.stationary) return false;
    const SourceCoefficients eff = sol.mirrored ? c.source.mirrored() : c.source;
    const double k = eff.composite();
    if (k > 1e-14) {
        const CriticalMachNumbers cm = critical_machs(k, c.model);
        if (!std::isfinite(cm.m2)) return false;
        const GasState anchor = sol.mirrored ? mirror_state(sol.right_input) : sol.left_input;
        return std::fabs(std::fabs(mach_number(anchor, c.model)) - cm.m2) <= 1e-6 * cm.m2;
    }
    if (k < -1e-14) {
        const GasState up = sol.mirrored ? mirror_state(sol.stationary->right)
                                         : sol.stationary->left;
        return std::fabs(std::fabs(mach_number(up, c.model)) - 1.0) <= 1e-6;
    }
    return false;
}

std::string csv_cell(double v) { return format_value(v); }

}  // namespace

int cmd_solve(const ProblemConfig& c, std::ostream& out, OutputFormat format) {
    try {
        const SingularSolution sol = solve(c.left, c.right, c.source, c.model, c.solver);
        const double k = c.source.composite();
        const CriticalMachNumbers cm = critical_machs(k, c.model);
        const GasState sm = sol.state_minus();
        const GasState sp = sol.state_plus();
        const double m_minus = mach_number(sm, c.model);
        const double m_plus = mach_number(sp, c.model);

        json meta{{"status", "ok"},
                  {"structure", to_string(sol.structure)},
                  {"mirrored", sol.mirrored},
                  {"k", k},
                  {"m_minus", m_minus},
                  {"m_plus", m_plus},
                  {"critical", {{"m1", format_value(cm.m1)}, {"m2", format_value(cm.m2)},
                                {"m3", format_value(cm.m3)}}},
                  {"residual_max", sol.diagnostics.overall()},
                  {"states",
                   {{"left", state_json(sol.left_input)},
                    {"right", state_json(sol.right_input)},
                    {"minus", state_json(sm)},
                    {"plus", state_json(sp)}}}};
        json waves = waves_json(sol.left_waves, "left");
        for (auto& w : waves_json(sol.right_waves, "right")) waves.push_back(w);
        meta["waves"] = waves;
        if (sol.classical) {
            meta["star"] = json{{"p", sol.classical->star_p}, {"u", sol.classical->star_u}};
        }
        if (double_branch_case(sol, c)) {
            json db{{"applies", true}};
            try {
                const double dev = verify_uniqueness_pair(c.left, c.right, c.source, c.model, c.solver);
                db["max_sample_deviation"] = dev;
                db["verdict"] = dev <= 1e-8 ? "coincide" : "diverge";
            } catch (const Error& e) {
                db["verdict"] = std::string("unverified: ") + e.what();
            }
            meta["double_branch"] = db;
        }

        if (format == OutputFormat::Structured) {
            out << meta.dump(2) << "\n";
        } else {
            out << "structure,mirrored,k,m_minus,m_plus,m1,m2,m3,residual_max\n";
            out << to_string(sol.structure) << "," << (sol.mirrored ? 1 : 0) << "," << csv_cell(k)
                << "," << csv_cell(m_minus) << "," << csv_cell(m_plus) << "," << format_value(cm.m1)
                << "," << format_value(cm.m2) << "," << format_value(cm.m3) << ","
                << csv_cell(sol.diagnostics.overall()) << "\n";
        }
        return 0;
    } catch (const Error& e) {
        return report_error(e, out);
    }
}

int cmd_profile(const ProblemConfig& c, std::ostream& out) {
    try {
        const SingularSolution sol = solve(c.left, c.right, c.source, c.model, c.solver);
        const int n = c.sampling.count;
        const double lo = c.sampling.xi_min;
        const double hi = c.sampling.xi_max;
        const double h = (hi - lo) / (n - 1);
        std::vector<double> xi(n);
        for (int i = 0; i < n; ++i) xi[i] = lo + h * i;

        // Jumps are rendered as paired one-sided samples half a cell from the
        // discontinuity, replacing the two adjacent grid rows.
        std::vector<double> jumps;
        auto add_jump = [&](const ClassicalWave& w) {
            if (!w.zero_strength && w.speed_lo == w.speed_hi) jumps.push_back(w.speed_lo);
        };
        if (sol.classical) {
            for (const auto& w : sol.classical->waves) add_jump(w);
        } else {
            for (const auto& w : sol.left_waves) add_jump(w);
            for (const auto& w : sol.right_waves) add_jump(w);
        }
        if (sol.stationary) jumps.push_back(0.0);
        std::sort(jumps.begin(), jumps.end());

        std::vector<bool> replaced(n, false);
        std::vector<double> at(xi);
        std::vector<Side> side(n, Side::Above);
        const double eps = 0.5 * h;
        for (double s : jumps) {
            if (s <= lo || s >= hi) continue;
            const int i = static_cast<int>(std::floor((s - lo) / h));
            if (i < 0 || i + 1 >= n || replaced[i] || replaced[i + 1]) continue;
            at[i] = s - eps;
            side[i] = Side::Below;
            at[i + 1] = s + eps;
            side[i + 1] = Side::Above;
            replaced[i] = replaced[i + 1] = true;
        }

        out << "xi,rho,u,p,mach\n";
        for (int i = 0; i < n; ++i) {
            const GasState s = sample(sol, at[i], side[i]);
            out << csv_cell(at[i]) << "," << csv_cell(s.rho) << "," << csv_cell(s.u) << ","
                << csv_cell(s.p) << "," << csv_cell(mach_number(s, c.model)) << "\n";
        }
        return 0;
    } catch (const Error& e) {
        return report_error(e, out);
    }
}

int cmd_curve(const ProblemConfig& c, std::ostream& out) {
    if (!c.curve) {
        return report_error(ValidationError("curve: section missing from config"), out);
    }
    const CurveSpec& spec = *c.curve;
    const double k = c.source.composite();
    out << "m_minus,m_plus,rho_ratio,u_ratio,p_ratio,status\n";
    auto emit_ok = [&](double mm, double mp, const char* status) {
        const StateRatios r = state_ratios(mm, mp, c.source, c.model);
        out << csv_cell(mm) << "," << csv_cell(mp) << "," << csv_cell(r.density) << ","
            << csv_cell(r.velocity) << "," << csv_cell(r.pressure) << "," << status << "\n";
    };
    auto emit_gap = [&](double mm, double mp, const char* status) {
        out << (std::isnan(mm) ? "" : csv_cell(mm)) << "," << (std::isnan(mp) ? "" : csv_cell(mp))
            << ",,,," << status << "\n";
    };
    const double nan = std::nan("");
    for (int i = 0; i < spec.count; ++i) {
        const double m = spec.m_min + (spec.m_max - spec.m_min) * i / (spec.count - 1);
        if (spec.kind == "forward") {
            try {
                const MachSolutions ms = downstream_mach(m, k, c.model, c.solver.sonic_tol);
                for (int b = 0; b < ms.count; ++b) emit_ok(m, ms.value[b], "ok");
            } catch (const NoSolutionError&) {
                emit_gap(m, nan, "no_solution");
            }
        } else if (spec.kind == "backward") {
            try {
                const MachSolutions ms = upstream_mach(m, k, c.model, c.solver.sonic_tol);
                for (int b = 0; b < ms.count; ++b) emit_ok(ms.value[b], m, "ok");
            } catch (const NoSolutionError&) {
                emit_gap(nan, m, "no_solution");
            }
        } else {  // branch
            try {
                emit_ok(m, branch_mach(StationaryBranch::Subsonic, m, k, c.model), "subsonic");
            } catch (const Error&) {
                emit_gap(m, nan, "no_solution");
            }
            try {
                const double mp = branch_mach(StationaryBranch::Supersonic, m, k, c.model);
                if (std::isfinite(mp)) emit_ok(m, mp, "supersonic");
                else emit_gap(m, nan, "branch_undefined");
            } catch (const NoSolutionError&) {
                emit_gap(m, nan, "no_solution");
            } catch (const BranchUndefinedError&) {
                emit_gap(m, nan, "branch_undefined");
            }
        }
    }
    return 0;
}

int cmd_critical(const ProblemConfig& c, std::ostream& out, OutputFormat format) {
    try {
        const double k = c.source.composite();
        const CriticalMachNumbers cm = critical_machs(k, c.model);
        const AdmissibleSets adm = admissible_sets(k, c.model);
        auto interval = [&](const MachInterval& iv) {
            std::ostringstream oss;
            oss << (iv.closed_lo ? "[" : "(") << format_value(iv.lo) << "," << format_value(iv.hi)
                << (iv.closed_hi ? "]" : ")");
            return oss.str();
        };
        const char* regime = k > 1e-14 ? "positive" : (k < -1e-14 ? "negative" : "zero");
        if (format == OutputFormat::Structured) {
            json doc{{"status", "ok"},
                     {"gamma", c.model.gamma},
                     {"k", k},
                     {"regime", regime},
                     {"m1", format_value(cm.m1)},
                     {"m2", format_value(cm.m2)},
                     {"m3", format_value(cm.m3)},
                     {"gamma_minus",
                      {{"subsonic", interval(adm.minus_subsonic)},
                       {"supersonic", interval(adm.minus_supersonic)}}},
                     {"gamma_plus",
                      {{"subsonic", interval(adm.plus_subsonic)},
                       {"supersonic", interval(adm.plus_supersonic)}}}};
            out << doc.dump(2) << "\n";
        } else {
            out << "gamma,k,regime,m1,m2,m3,gamma_minus_sub,gamma_minus_super,gamma_plus_sub,"
                   "gamma_plus_super\n";
            out << csv_cell(c.model.gamma) << "," << csv_cell(k) << "," << regime << ","
                << format_value(cm.m1) << "," << format_value(cm.m2) << "," << format_value(cm.m3)
                << "," << interval(adm.minus_subsonic) << "," << interval(adm.minus_supersonic)
                << "," << interval(adm.plus_subsonic) << "," << interval(adm.plus_supersonic)
                << "\n";
        }
        return 0;
    } catch (const Error& e) {
        return report_error(e, out);
    }
}

int cmd_sweep(const ProblemConfig& c, std::ostream& out) {
    if (!c.sweep) {
        return report_error(ValidationError("sweep: section missing from config"), out);
    }
    const SweepSpec& spec = *c.sweep;

    struct Row {
        double k, ml, mr;
        std::string type = "";
        std::string status = "ok";
        double m_minus = 0, m_plus = 0, residual = 0;
        bool mirrored = false;
    };
    std::vector<Row> rows;
    for (double kv : spec.k_values) {
        for (int i = 0; i < spec.ml_count; ++i) {
            const double ml = spec.ml_count == 1
                                  ? spec.ml_min
                                  : spec.ml_min + (spec.ml_max - spec.ml_min) * i / (spec.ml_count - 1);
            for (int j = 0; j < spec.mr_count; ++j) {
                const double mr = spec.mr_count == 1
                                      ? spec.mr_min
                                      : spec.mr_min + (spec.mr_max - spec.mr_min) * j / (spec.mr_count - 1);
                rows.push_back({kv, ml, mr});
            }
        }
    }

    auto run_row = [&](Row& r) {
        const GasModel model = c.model;
        const GasState ul{spec.rho_left, r.ml * std::sqrt(model.gamma * spec.p_left / spec.rho_left),
                          spec.p_left};
        const GasState ur{spec.rho_right,
                          r.mr * std::sqrt(model.gamma * spec.p_right / spec.rho_right), spec.p_right};
        const SourceCoefficients coeffs{0.0, 0.0, r.k};
        try {
            const SingularSolution sol = solve(ul, ur, coeffs, model, c.solver);
            r.type = to_string(sol.structure);
            r.mirrored = sol.mirrored;
            r.m_minus = mach_number(sol.state_minus(), model);
            r.m_plus = mach_number(sol.state_plus(), model);
            r.residual = sol.diagnostics.overall();
        } catch (const Error& e) {
            r.type = "none";
            r.status = e.kind();
        }
    };

    const int workers = std::min<int>(spec.workers, static_cast<int>(rows.size()));
    if (workers <= 1) {
        for (auto& r : rows) run_row(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const size_t idx = next.fetch_add(1);
                    if (idx >= rows.size()) return;
                    run_row(rows[idx]);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    out << "k,ml,mr,type,mirrored,m_minus,m_plus,residual,status\n";
    for (const auto& r : rows) {
        out << csv_cell(r.k) << "," << csv_cell(r.ml) << "," << csv_cell(r.mr) << "," << r.type
            << "," << (r.mirrored ? 1 : 0) << "," << csv_cell(r.m_minus) << ","
            << csv_cell(r.m_plus) << "," << csv_cell(r.residual) << "," << r.status << "\n";
    }
    return 0;
}

}  // namespace eulerps
