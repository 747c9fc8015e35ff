// pvlab: batch driver for the plasma/vacuum interface laboratory.
// Subcommands: run, verify, solve-vacuum, cascade, linearize-check.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pvlab/analysis.hpp"
#include "pvlab/errors.hpp"
#include "pvlab/init_compat.hpp"
#include "pvlab/interface.hpp"
#include "pvlab/io.hpp"
#include "pvlab/linearized.hpp"
#include "pvlab/vacuum_elliptic.hpp"
#include "pvlab/verify.hpp"

using namespace pvlab;

namespace {

const double PI = 3.14159265358979323846;

// exit codes: 0 ok, 1 criterion failures, 2 config/io error, 3 CFL,
// 4 stability margin, 5 admissibility/hyperbolicity, 6 other numerical guard
struct RunConfig {
    int n1p = 17, n1m = 17, n2 = 8, n3 = 8;
    double dt = 4e-3;
    int steps = 100;
    double gamma = 5.0 / 3.0;
    double delta0 = 0.5;
    double front_cap = 0.45;
    double cg_tol = 1e-10;
    std::string scenario = "equilibrium";
    double perturb_amp = 5e-3;
    std::string outdir = ".";
    int dump_every = 0; // 0: dump only the final state
    std::string jay_file; // optional time-sampled wall datum (t, j2, j3 rows)
};

void apply_config_file(RunConfig& rc, const std::string& path) {
    Config c = read_config(path);
    rc.n1p = config_get(c, "grid.n1p", rc.n1p);
    rc.n1m = config_get(c, "grid.n1m", rc.n1m);
    rc.n2 = config_get(c, "grid.n2", rc.n2);
    rc.n3 = config_get(c, "grid.n3", rc.n3);
    rc.dt = config_get(c, "time.dt", rc.dt);
    rc.steps = config_get(c, "time.steps", rc.steps);
    rc.gamma = config_get(c, "physics.gamma", rc.gamma);
    rc.delta0 = config_get(c, "physics.delta0", rc.delta0);
    rc.front_cap = config_get(c, "physics.front_cap", rc.front_cap);
    rc.cg_tol = config_get(c, "solver.cg_tol", rc.cg_tol);
    rc.scenario = config_get(c, "run.scenario", rc.scenario);
    rc.perturb_amp = config_get(c, "run.perturb_amp", rc.perturb_amp);
    rc.outdir = config_get(c, "run.outdir", rc.outdir);
    rc.dump_every = config_get(c, "run.dump_every", rc.dump_every);
    rc.jay_file = config_get(c, "run.jay_file", rc.jay_file);
}

// piecewise-constant-in-time wall datum from a whitespace table "t j2 j3"
struct JaySchedule {
    std::vector<double> t, j2, j3;
    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open wall-datum file: " + path);
        double a, b, c;
        while (in >> a >> b >> c) {
            t.push_back(a);
            j2.push_back(b);
            j3.push_back(c);
        }
        if (t.empty()) throw std::runtime_error("empty wall-datum file: " + path);
    }
    void at(double time, TorusVec3& jay) const {
        if (t.empty()) return;
        std::size_t i = 0;
        while (i + 1 < t.size() && t[i + 1] <= time) ++i;
        for (std::size_t m = 0; m < jay[1].v.size(); ++m) {
            jay[1].v[m] = j2[i];
            jay[2].v[m] = j3[i];
        }
    }
};

int cmd_run(const RunConfig& rc) {
    EquilibriumSetup eq = make_equilibrium(rc.n1p, rc.n2, rc.n3);
    CoupledOpts opts;
    opts.eos.gamma = rc.gamma;
    opts.delta0 = rc.delta0;
    opts.front_bound = rc.front_cap;
    opts.vacuum.cg_tol = rc.cg_tol;
    Grid gv = vacuum_grid(rc.n1m, rc.n2, rc.n3);

    CoupledState s = eq.state;
    if (rc.scenario == "perturbed") {
        const Grid gp = s.U[0].grid;
        for (int j = 0; j < rc.n2; ++j)
            for (int k = 0; k < rc.n3; ++k)
                s.phi(j, k) = rc.perturb_amp * std::cos(2 * PI * s.phi.x2(j));
        MetricPack mp = build_metric(lift_front(s.phi, gp));
        Vec3Field hconst = make_vec3(gp);
        for (std::size_t m = 0; m < hconst[0].size(); ++m) hconst[1].v[m] = 1.0;
        Vec3Field H = apply_eta_inv(mp, hconst);
        for (int a = 0; a < 3; ++a) s.U[4 + a] = H[a];
    } else if (rc.scenario != "equilibrium") {
        throw std::runtime_error("unknown scenario: " + rc.scenario);
    }

    JaySchedule sched;
    TorusVec3 jay = eq.jay;
    if (!rc.jay_file.empty()) {
        sched.load(rc.jay_file);
        sched.at(s.t, jay);
    }

    const std::vector<std::string> header{"step",      "t",           "energy",
                                          "div_h_max", "HN_trace_max", "margin_min",
                                          "front_l2",  "front_h1",     "elliptic_curl",
                                          "elliptic_div"};
    std::vector<std::vector<double>> rows;
    auto record = [&](int step, const CoupledDiagnostics& d) {
        rows.push_back({double(step), s.t, d.energy, d.constraints.div_h_max,
                        d.constraints.HN_front_max, d.margin, d.front_l2, d.front_h1,
                        d.elliptic.curl, d.elliptic.div});
    };
    auto dump = [&](int step) {
        const std::string base = rc.outdir + "/state_" + std::to_string(step);
        std::vector<std::pair<std::string, const Field*>> fields;
        const char* names[8] = {"q", "v1", "v2", "v3", "H1", "H2", "H3", "S"};
        for (int c = 0; c < 8; ++c) fields.emplace_back(names[c], &s.U[c]);
        dump_fields(base, s.U[0].grid, s.t, fields);
    };

    CoupledDiagnostics d = coupled_diagnostics(s, jay, opts, &gv);
    record(0, d);
    for (int step = 1; step <= rc.steps; ++step) {
        if (!rc.jay_file.empty()) sched.at(s.t, jay);
        s = coupled_step(s, jay, rc.dt, opts, &d, &gv);
        record(step, d);
        if (rc.dump_every > 0 && step % rc.dump_every == 0) dump(step);
    }
    dump(rc.steps);
    write_csv(rc.outdir + "/diagnostics.csv", header, rows);
    for (std::size_t c = 2; c < header.size(); ++c) {
        std::vector<double> xs, ys;
        for (const auto& row : rows) {
            xs.push_back(row[1]);
            ys.push_back(row[c]);
        }
        write_series(rc.outdir + "/" + header[c] + ".dat", xs, ys);
    }
    std::cout << "completed " << rc.steps << " steps, t = " << s.t << "\n";
    return 0;
}

int cmd_solve_vacuum(const std::string& data_file, const std::string& outdir) {
    Config c = read_config(data_file);
    const int n1 = config_get(c, "grid.n1", 17);
    const int n2 = config_get(c, "grid.n2", 8);
    const int n3 = config_get(c, "grid.n3", 8);
    Grid g = vacuum_grid(n1, n2, n3);
    TorusField phi(n2, n3);
    const double amp = config_get(c, "front.amp", 0.0);
    const int mode = config_get(c, "front.mode", 1);
    for (int j = 0; j < n2; ++j)
        for (int k = 0; k < n3; ++k) phi(j, k) = amp * std::cos(2 * PI * mode * phi.x2(j));
    MetricPack mp = build_metric(lift_front(phi, g));
    VacuumData data = zero_vacuum_data(g);
    const double g3c = config_get(c, "data.g3", 0.0);
    const double j2 = config_get(c, "data.jay2", 1.0);
    const double j3 = config_get(c, "data.jay3", -std::sqrt(3.0));
    for (int j = 0; j < n2; ++j)
        for (int k = 0; k < n3; ++k) {
            data.g3(j, k) = g3c;
            data.g5[1](j, k) = j2;
            data.g5[2](j, k) = j3;
        }
    SolveOpts opts;
    opts.cg_tol = config_get(c, "solver.cg_tol", 1e-10);
    VacuumSolution sol = solve_divcurl(data, mp, opts);
    std::vector<std::pair<std::string, const Field*>> fields{
        {"H1", &sol.H[0]}, {"H2", &sol.H[1]}, {"H3", &sol.H[2]}};
    dump_fields(outdir + "/vacuum", g, 0.0, fields);
    std::cout << "cg iterations " << sol.cg_iters << ", residuals: curl " << sol.res.curl
              << ", div " << sol.res.div << ", interface " << sol.res.bc_normal << ", wall "
              << sol.res.bc_wall << "\n";
    return 0;
}

int cmd_cascade(int n1, int n2, int n3, int J, const std::string& scenario, double amp) {
    EquilibriumSetup eq = make_equilibrium(n1, n2, n3);
    State8 U0 = eq.state.U;
    if (scenario == "perturbed") {
        const Grid& gp = U0[0].grid;
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j)
                for (int k = 0; k < n3; ++k) {
                    const double w = std::sin(PI * gp.x1(i));
                    U0[2](i, j, k) += amp * w * std::sin(2 * PI * gp.x2(j));
                    U0[1](i, j, k) += amp * w * std::sin(2 * PI * gp.x3(k));
                }
    } else if (scenario != "equilibrium") {
        throw std::runtime_error("unknown scenario: " + scenario);
    }
    InitialDataBundle b =
        make_bundle(Eos{}, U0, eq.state.phi, eq.jay, vacuum_grid(n1, n2, n3));
    derivative_cascade(b, J);
    CompatOrderReport rep = check_compat_order(b, J + 1);
    for (std::size_t j = 0; j < rep.pressure.size(); ++j)
        std::printf("pressure-condition residual, order %zu: %.6e\n", j, rep.pressure[j]);
    for (std::size_t j = 0; j < rep.wall_v1.size(); ++j)
        std::printf("wall v1 residual, order %zu: %.6e\n", j, rep.wall_v1[j]);
    std::printf("top-order wall trace: %.6e\n", rep.weighted_trace);
    return 0;
}

int cmd_linearize_check(int n1, int n2, int n3) {
    Grid gp = plasma_grid(n1, n2, n3), gv = vacuum_grid(n1, n2, n3);
    // the same rich-state configuration the verification suite uses
    auto smooth = [&](const Grid& g, unsigned seed, double a) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Field f(g);
        for (int m1 = 0; m1 <= 2; ++m1)
            for (int k2 = -1; k2 <= 1; ++k2)
                for (int k3 = -1; k3 <= 1; ++k3) {
                    const double ca = u(rng) / 27.0, cb = u(rng) / 27.0;
                    for (int i = 0; i < g.g1.n; ++i)
                        for (int j = 0; j < g.n2; ++j)
                            for (int k = 0; k < g.n3; ++k) {
                                const double th = 2 * PI * (k2 * g.x2(j) + k3 * g.x3(k));
                                f(i, j, k) += a * std::cos(PI * m1 * (g.x1(i) - g.g1.a)) *
                                              (ca * std::cos(th) + cb * std::sin(th));
                            }
                }
        return f;
    };
    State8 U = make_state(gp), Ut = make_state(gp);
    U[0] = smooth(gp, 11, 0.2);
    for (std::size_t m = 0; m < U[0].size(); ++m) U[0].v[m] += 2.0;
    for (int c = 1; c < 4; ++c) U[c] = smooth(gp, 20 + c, 0.2);
    for (int c = 4; c < 8; ++c) U[c] = smooth(gp, 27 + c, 0.2);
    for (std::size_t m = 0; m < U[5].size(); ++m) U[5].v[m] += 1.0;
    for (int c = 0; c < 8; ++c) Ut[c] = smooth(gp, 40 + c, 0.2);
    Vec3Field H{smooth(gv, 51, 0.3), smooth(gv, 52, 0.3), smooth(gv, 53, 0.3)};
    for (std::size_t m = 0; m < H[1].size(); ++m) H[1].v[m] += 1.7;
    TorusField phi(n2, n3), phit(n2, n3);
    BasicState s = make_basic_state(Eos{}, U, Ut, H, phi, phit, gp, gv);
    Perturbation d = zero_perturbation(gp, gv);
    for (int c = 0; c < 8; ++c) {
        d.dU[c] = smooth(gp, 70 + c, 0.5);
        d.dUt[c] = smooth(gp, 80 + c, 0.5);
    }
    for (int c = 0; c < 3; ++c) d.dH[c] = smooth(gv, 90 + c, 0.5);
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    FrechetReport r = frechet_verify(s, d, eps);
    for (std::size_t i = 0; i < eps.size(); ++i)
        std::printf("eps %.0e: interior %.6e, vacuum %.6e, boundary %.6e\n", eps[i],
                    r.err_plasma[i], r.err_vacuum[i], r.err_boundary[i]);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"plasma-vacuum interface laboratory"};
    app.require_subcommand(1);

    RunConfig rc;
    std::string config_file, subset = "all", report_path, data_file, outdir = ".";
    int J = 2, ln1 = 17, ln2 = 8, ln3 = 8;
    std::string cascade_scenario = "equilibrium";
    double cascade_amp = 0.01;

    auto* run = app.add_subcommand("run", "time-step the coupled system");
    run->add_option("--config", config_file, "key = value configuration file");
    run->add_option("--n1p", rc.n1p, "plasma slab nodes");
    run->add_option("--n1m", rc.n1m, "vacuum slab nodes");
    run->add_option("--n2", rc.n2, "tangential modes (x2)");
    run->add_option("--n3", rc.n3, "tangential modes (x3)");
    run->add_option("--dt", rc.dt, "time step");
    run->add_option("--steps", rc.steps, "number of steps");
    run->add_option("--gamma", rc.gamma, "adiabatic exponent");
    run->add_option("--delta0", rc.delta0, "stability-margin floor");
    run->add_option("--front-cap", rc.front_cap, "front amplitude cap");
    run->add_option("--scenario", rc.scenario, "equilibrium | perturbed");
    run->add_option("--perturb-amp", rc.perturb_amp, "front perturbation amplitude");
    run->add_option("--outdir", rc.outdir, "output directory");
    run->add_option("--dump-every", rc.dump_every, "field-dump stride (0: final only)");
    run->add_option("--jay-file", rc.jay_file, "time-sampled wall datum file");

    auto* ver = app.add_subcommand("verify", "run the acceptance suite");
    ver->add_option("--subset", subset, "all | elliptic");
    ver->add_option("--out", report_path, "also write the report to this file");

    auto* sv = app.add_subcommand("solve-vacuum", "one-shot elliptic solve");
    sv->add_option("--data", data_file, "data file (key = value)")->required();
    sv->add_option("--outdir", outdir, "output directory");

    auto* casc = app.add_subcommand("cascade", "initial-data compatibility report");
    casc->add_option("--n1", ln1);
    casc->add_option("--n2", ln2);
    casc->add_option("--n3", ln3);
    casc->add_option("--depth", J, "cascade depth");
    casc->add_option("--scenario", cascade_scenario, "equilibrium | perturbed");
    casc->add_option("--amp", cascade_amp, "perturbation amplitude");

    auto* lin = app.add_subcommand("linearize-check", "finite-difference linearization report");
    lin->add_option("--n1", ln1);
    lin->add_option("--n2", ln2);
    lin->add_option("--n3", ln3);

    CLI11_PARSE(app, argc, argv);
    (void)pvlab_threads(); // parallelism cap resolved once up front

    try {
        if (run->parsed()) {
            if (!config_file.empty()) apply_config_file(rc, config_file);
            return cmd_run(rc);
        }
        if (ver->parsed()) {
            const auto results = run_acceptance(subset);
            const int failures = print_acceptance(std::cout, results);
            if (!report_path.empty()) {
                std::ofstream out(report_path);
                if (!out) throw std::runtime_error("cannot open report file: " + report_path);
                print_acceptance(out, results);
            }
            return failures == 0 ? 0 : 1;
        }
        if (sv->parsed()) return cmd_solve_vacuum(data_file, outdir);
        if (casc->parsed()) return cmd_cascade(ln1, ln2, ln3, J, cascade_scenario, cascade_amp);
        if (lin->parsed()) return cmd_linearize_check(ln1, ln2, ln3);
    } catch (const CflViolation& e) {
        std::cerr << "error (CFL): " << e.what() << "\n";
        return 3;
    } catch (const StabilityMarginLost& e) {
        std::cerr << "error (stability margin): " << e.what() << "\n";
        return 4;
    } catch (const HyperbolicityLost& e) {
        std::cerr << "error (admissibility): " << e.what() << "\n";
        return 5;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
