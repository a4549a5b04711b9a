// cdt — command-line front end for the center-dynamics toolkit:
// reaction-network parsing, equilibrium classification, conserved-quantity
// simulation, center-manifold construction, boundary dynamics, bifurcation
// scans, the acceptance battery, and the empirical experiment harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "cdt/analysis.hpp"
#include "cdt/boundary.hpp"
#include "cdt/integrate.hpp"
#include "cdt/network.hpp"
#include "cdt/parallel.hpp"
#include "cdt/poincare.hpp"
#include "cdt/transform.hpp"
#include "cdt/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad number in list: " + item);
        out.push_back(v);
    }
    return out;
}

cdt::Kappa kappa_from_flag(const std::string& kappa_flag, bool assume_center) {
    const auto vals = parse_csv_doubles(kappa_flag);
    if (vals.size() != 4) throw std::invalid_argument("--kappa expects four values a,b,c,d");
    cdt::Kappa k{vals[0], vals[1], vals[2], vals[3]};
    cdt::require_positive(k);
    return assume_center ? cdt::centered(k) : k;
}

cdt::ReactionNetwork load_network(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) return cdt::builtin(std::string_view(spec).substr(8));
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("cannot open network file: " + spec);
    std::stringstream ss;
    ss << in.rdbuf();
    std::vector<std::string> warnings;
    auto net = cdt::parse_network(ss.str(), &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return net;
}

cdt::SystemParams params_for(const cdt::ReactionNetwork& net, const std::string& kappa_flag,
                             const std::string& rates_flag) {
    cdt::SystemParams p;
    if (!rates_flag.empty()) {
        std::stringstream ss(rates_flag);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("--rates expects name=value pairs");
            p.set(item.substr(0, eq), std::stod(item.substr(eq + 1)));
        }
    }
    if (!kappa_flag.empty()) {
        const auto vals = parse_csv_doubles(kappa_flag);
        for (size_t i = 0; i < vals.size(); ++i) p.set("k" + std::to_string(i + 1), vals[i]);
    }
    // Every rate symbol of the network must be covered.
    for (const auto& r : net.reactions()) p.at(r.rate_symbol);
    return p;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

double u01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// ---------------------------------------------------------------- parse ----

int cmd_parse(const std::string& network_flag, bool as_json) {
    const auto net = load_network(network_flag);
    if (as_json)
        std::cout << cdt::to_json(net).dump(2) << "\n";
    else
        std::cout << cdt::pretty_print(net);
    return 0;
}

// -------------------------------------------------------------- classify ----

int cmd_classify(const std::string& kappa_flag, bool assume_center) {
    const auto rep = cdt::classify_stability(kappa_from_flag(kappa_flag, assume_center));
    std::cout << cdt::to_json(rep).dump(2) << "\n";
    return 0;
}

// -------------------------------------------------------------- simulate ----

int cmd_simulate(const std::string& network_flag, const std::string& kappa_flag,
                 const std::string& rates_flag, std::string y0_flag, double tmax, double rtol,
                 double atol, int dense, const std::string& out_dir, bool assume_center, bool guard) {
    auto net = load_network(network_flag);
    auto params = params_for(net, kappa_flag, rates_flag);

    const bool is_paper4 = network_flag == "builtin:paper4";
    std::optional<cdt::Kappa> kq;
    if (params.has("k1") && params.has("k2") && params.has("k3") && params.has("k4")) {
        cdt::Kappa k = cdt::kappa_from(params);
        if (assume_center) {
            k = cdt::centered(k);
            params = cdt::params_from(k);
        }
        kq = k;
    }

    Eigen::VectorXd y0(net.species_count());
    if (y0_flag.empty()) {
        y0.setOnes();
    } else {
        const auto vals = parse_csv_doubles(y0_flag);
        if (static_cast<int>(vals.size()) != net.species_count())
            throw std::invalid_argument("--y0 must list one value per species");
        for (int i = 0; i < y0.size(); ++i) y0[i] = vals[i];
    }

    const cdt::MassActionSystem sys(net, params);
    cdt::IntegratorConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = atol;
    cfg.positivity_guard = guard;
    const auto traj = cdt::integrate([&](double, const Eigen::VectorXd& s) { return sys(s); }, y0, 0.0,
                                     tmax, cfg);

    std::vector<std::string> names;
    for (const auto& sp : net.species()) names.push_back(lower(sp));
    const std::string csv = cdt::trajectory_csv(traj, names, dense);

    json rep;
    rep["network"] = network_flag;
    rep["t_span"] = {0.0, tmax};
    rep["status"] = cdt::to_string(traj.status);
    rep["steps_accepted"] = traj.stats.accepted;
    rep["steps_rejected"] = traj.stats.rejected;
    rep["rhs_evaluations"] = traj.stats.rhs_evaluations;

    auto add_drift = [&](const char* key, const std::function<double(const Eigen::VectorXd&)>& fn) {
        rep[key] = cdt::conserved_drift(traj, fn);
    };
    if (is_paper4 && kq && cdt::is_center(*kq)) {
        const cdt::Kappa k = *kq;
        add_drift("V_drift", [k](const Eigen::VectorXd& s) {
            return cdt::constant_of_motion(k, cdt::Vec3(s[0], s[1], s[2]));
        });
        add_drift("H_drift", [k](const Eigen::VectorXd& s) {
            const cdt::Vec3 u = cdt::to_pqr(k, cdt::Vec3(s[0], s[1], s[2]));
            return cdt::hamiltonian(k, u[0], u[1]);
        });
    }
    if (network_flag == "builtin:lotka") {
        const double c1 = params.at("k1"), c2 = params.at("k2"), c3 = params.at("k3");
        add_drift("lotka_integral_drift", [=](const Eigen::VectorXd& s) {
            return std::pow(s[0], c3) * std::pow(s[1], c1) * std::exp(-c2 * (s[0] + s[1]));
        });
    }
    if (network_flag == "builtin:ivanova") {
        const double c1 = params.at("k1"), c2 = params.at("k2"), c3 = params.at("k3");
        add_drift("ivanova_integral_drift", [=](const Eigen::VectorXd& s) {
            return std::pow(s[0], c3) * std::pow(s[1], c1) * std::pow(s[2], c2);
        });
        add_drift("total_mass_drift", [](const Eigen::VectorXd& s) { return s.sum(); });
    }
    if (network_flag == "builtin:symmetric9") {
        add_drift("symmetric_ratio_drift", [](const Eigen::VectorXd& s) {
            const double sum = s.sum();
            return s[0] * s[1] * s[2] / (sum * sum * sum);
        });
    }

    if (out_dir.empty()) {
        std::cout << csv;
        std::cerr << rep.dump(2) << "\n";
    } else {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "trajectory.csv", csv);
        std::cout << rep.dump(2) << "\n";
    }
    return traj.status == cdt::IntegrationStatus::Completed ? 0 : 2;
}

// -------------------------------------------------------------- manifold ----

std::string figure3_script(int orbit_count) {
    std::ostringstream gp;
    gp << "# gnuplot script: periodic orbits (blue), stable manifold (red),\n"
          "# boundary curve (magenta)\n"
          "set ticslevel 0\n"
          "set xlabel 'x'\nset ylabel 'y'\nset zlabel 'z'\n"
          "set view 60, 120\n"
          "splot \\\n";
    gp << "  for [i=0:" << orbit_count - 1
       << "] sprintf('orbit_%02d.csv', i) u 2:3:4 w l lc rgb 'blue' notitle, \\\n";
    gp << "  'stable_manifold.csv' u 1:2:3 w l lw 2 lc rgb 'red' title 'stable manifold', \\\n";
    gp << "  'boundary_curve.csv' u 2:3:4 w l lw 2 lc rgb 'magenta' title 'boundary curve'\n";
    return gp.str();
}

int cmd_manifold(const std::string& kappa_flag, bool assume_center, double qmin, double qmax,
                 int qcount, int samples, double rtol, double atol, const std::string& out_dir) {
    cdt::Kappa k = kappa_from_flag(kappa_flag, assume_center);
    cdt::require_center(k);
    cdt::IntegratorConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = atol;

    const auto grid = cdt::log_spaced(qmin, qmax, qcount);
    const auto mesh = cdt::center_manifold_mesh(k, grid, samples, cfg);

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "mesh.csv", cdt::mesh_csv(mesh));
    char name[32];
    for (size_t i = 0; i < mesh.records.size(); ++i) {
        std::snprintf(name, sizeof name, "orbit_%02zu.csv", i);
        write_file(fs::path(out_dir) / name, cdt::orbit_csv(mesh.records[i], mesh.orbits[i]));
    }
    write_file(fs::path(out_dir) / "surface.obj", cdt::mesh_obj(mesh));

    // Stable manifold polyline: x in [xmax/20, xmax].
    {
        const double xmax = std::sqrt(k.k4 / k.k2);
        std::string csv = "x,y,z\n";
        char b[128];
        for (int i = 0; i < 200; ++i) {
            const double x = xmax / 20.0 + (xmax - xmax / 20.0) * i / 199.0;
            const cdt::Vec3 s = cdt::stable_manifold_point(k, x);
            std::snprintf(b, sizeof b, "%.17g,%.17g,%.17g\n", s[0], s[1], s[2]);
            csv += b;
        }
        write_file(fs::path(out_dir) / "stable_manifold.csv", csv);
    }
    write_file(fs::path(out_dir) / "boundary_curve.csv", cdt::boundary_curve_csv(k, -8.0, 8.0, 1601));
    write_file(fs::path(out_dir) / "figure3.gp", figure3_script(static_cast<int>(mesh.records.size())));

    json rep;
    rep["levels"] = mesh.records.size();
    rep["q_grid"] = {qmin, qmax};
    rep["samples_per_orbit"] = samples;
    rep["out"] = out_dir;
    double max_yz = -1e300;
    for (const auto& orbit : mesh.orbits)
        for (const auto& p : orbit) max_yz = std::max(max_yz, p[1] * p[2]);
    rep["max_yz"] = max_yz;
    rep["yz_bound"] = 2 * k.k4 / k.k3;
    std::cout << rep.dump(2) << "\n";
    return 0;
}

// -------------------------------------------------------------- boundary ----

int cmd_boundary(const std::string& kappa_flag, bool assume_center, double tau_min, double tau_max,
                 int samples, const std::string& out_dir) {
    const cdt::Kappa k = kappa_from_flag(kappa_flag, assume_center);
    cdt::require_center(k);
    fs::create_directories(out_dir);

    const std::vector<double> c_grid{-0.9, -0.7, -0.5, -0.3, -0.15, -0.05,
                                     0.0,  0.1,  0.3,  1.0,  3.0,   10.0};
    json classes = json::array();
    std::vector<std::string> files;
    char name[48];
    for (size_t i = 0; i < c_grid.size(); ++i) {
        const auto sol = cdt::FacetSolution::with_c(c_grid[i]);
        std::snprintf(name, sizeof name, "facet_%02zu.csv", i);
        write_file(fs::path(out_dir) / name, cdt::facet_csv(sol, tau_min, tau_max, samples));
        files.push_back(name);
        json jc;
        jc["C"] = c_grid[i];
        jc["file"] = name;
        jc["class"] = cdt::to_string(sol.classify());
        if (sol.domain_start()) jc["domain_start"] = *sol.domain_start();
        classes.push_back(jc);
    }
    {
        const auto zaxis = cdt::FacetSolution::z_axis();
        write_file(fs::path(out_dir) / "facet_zaxis.csv", cdt::facet_csv(zaxis, tau_min, tau_max, samples));
        json jc;
        jc["C"] = "infinity";
        jc["file"] = "facet_zaxis.csv";
        jc["class"] = cdt::to_string(zaxis.classify());
        classes.push_back(jc);
    }
    write_file(fs::path(out_dir) / "boundary_curve.csv",
               cdt::boundary_curve_csv(k, tau_min, tau_max, samples));

    std::ostringstream gp;
    gp << "# gnuplot script: facet phase portrait with the three highlighted members\n"
          "set xlabel 'y'\nset ylabel 'z'\n"
          "set xrange [0:4]\nset yrange [" << tau_min << ":" << tau_max << "]\n"
          "plot \\\n";
    for (size_t i = 0; i < files.size(); ++i) {
        const double C = c_grid[i];
        std::string style = "lc rgb 'gray' notitle";
        if (C == -0.3) style = "lw 2 lc rgb 'blue' title 'C = -0.3 (not complete)'";
        if (C == 0.0) style = "lw 3 lc rgb 'magenta' title 'C = 0 (complete on the facet)'";
        if (C == 1.0) style = "lw 2 lc rgb 'dark-green' title 'C = 1 (complete in G1 only)'";
        gp << "  '" << files[i] << "' u 2:3 w l " << style << ", \\\n";
    }
    gp << "  'facet_zaxis.csv' u 2:3 w l lc rgb 'black' title 'z-axis (C = infinity)'\n";
    write_file(fs::path(out_dir) / "figure2.gp", gp.str());

    json rep;
    rep["solutions"] = classes;
    rep["out"] = out_dir;
    std::cout << rep.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------ scan ----

int cmd_scan(const std::string& kappa_flag, double k1_min, double k1_max, double k1_step, int returns,
             const std::string& out_file) {
    const auto base = parse_csv_doubles(kappa_flag);
    if (base.size() != 4) throw std::invalid_argument("--kappa expects four values (k1 is overridden)");

    std::vector<double> k1s;
    for (double k1 = k1_min; k1 <= k1_max + 1e-12; k1 += k1_step) k1s.push_back(k1);

    const auto rows = cdt::parallel_map(k1s.size(), [&](size_t i) -> std::string {
        const cdt::Kappa k{k1s[i], base[1], base[2], base[3]};
        const auto rep = cdt::classify_stability(k);
        double max_re = -1e300;
        for (const auto& ev : rep.eigenvalues) max_re = std::max(max_re, ev.real());
        const auto amps = cdt::section_amplitudes(k, returns);
        double dev = 0;
        for (size_t j = 1; j < amps.size(); ++j) dev = std::max(dev, std::abs(amps[j] - amps[0]));
        int trend = 0;
        if (dev > 1e-6) trend = amps.back() > amps.front() ? +1 : -1;
        char row[160];
        std::snprintf(row, sizeof row, "%.17g,%s,%.17g,%d\n", k1s[i], cdt::to_string(rep.cls).c_str(),
                      max_re, trend);
        return row;
    });

    std::string csv = "k1,class,max_re,amplitude_trend\n";
    for (const auto& row : rows) csv += row;
    if (out_file.empty())
        std::cout << csv;
    else
        write_file(out_file, csv);
    return 0;
}

// ---------------------------------------------------------------- verify ----

int cmd_verify(const std::string& cli_path) {
    cdt::VerifyOptions opt;
    opt.cli_path = cli_path;
    const auto results = cdt::run_acceptance(opt);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %s — %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "all criteria passed" : "SOME CRITERIA FAILED");
    return all ? 0 : 1;
}

// ------------------------------------------------------------ experiment ----

int cmd_experiment(const std::string& kappa_flag, int seeds, double tmax, unsigned seed,
                   double conv_radius, double escape_norm, const std::string& out_dir) {
    const cdt::Kappa k = kappa_from_flag(kappa_flag, false);
    const double disc = k.discriminant();
    if (disc == 0) throw std::invalid_argument("experiment requires k1 != k2 + k3");
    const bool study_convergence = disc > 0;
    const cdt::Vec3 eq = cdt::positive_equilibrium(k);

    std::mt19937_64 gen(seed);
    std::vector<cdt::Vec3> starts;
    for (int i = 0; i < seeds; ++i)
        starts.push_back({0.3 * std::exp(u01(gen) * std::log(2.5 / 0.3)),
                          0.3 * std::exp(u01(gen) * std::log(2.5 / 0.3)),
                          0.3 * std::exp(u01(gen) * std::log(2.5 / 0.3))});

    struct Outcome {
        bool converged = false, escaped = false;
        double final_metric = 0;
        std::string curve;  // "t,metric" samples
    };
    const auto outcomes = cdt::parallel_map(starts.size(), [&](size_t i) {
        Outcome o;
        Eigen::VectorXd s(3);
        s << starts[i][0], starts[i][1], starts[i][2];
        cdt::IntegratorConfig cfg;
        cfg.max_time = tmax + 1;
        const auto traj = cdt::integrate(
            [&](double, const Eigen::VectorXd& w) -> Eigen::VectorXd {
                return cdt::rhs_xyz(k, cdt::Vec3(w[0], w[1], w[2]));
            },
            s, 0.0, tmax, cfg);
        char b[64];
        double metric = 0;
        for (size_t j = 0; j < traj.times().size(); j += std::max<size_t>(1, traj.times().size() / 200)) {
            const auto& w = traj.states()[j];
            metric = study_convergence ? (cdt::Vec3(w[0], w[1], w[2]) - eq).norm()
                                       : w.cwiseAbs().maxCoeff();
            std::snprintf(b, sizeof b, "%.10g,%.10g\n", traj.times()[j], metric);
            o.curve += b;
            if (!study_convergence && metric >= escape_norm) break;
        }
        const auto& last = traj.back();
        o.final_metric = study_convergence ? (cdt::Vec3(last[0], last[1], last[2]) - eq).norm()
                                           : last.cwiseAbs().maxCoeff();
        o.converged = o.final_metric <= conv_radius;
        o.escaped = o.final_metric >= escape_norm ||
                    traj.status == cdt::IntegrationStatus::StepUnderflow ||
                    traj.status == cdt::IntegrationStatus::NonFinite;
        return o;
    });

    int converged = 0, escaped = 0;
    for (const auto& o : outcomes) {
        converged += o.converged;
        escaped += o.escaped;
    }

    json rep;
    rep["label"] = "empirical study of an open question — observations only, no claims";
    rep["kappa"] = {k.k1, k.k2, k.k3, k.k4};
    rep["mode"] = study_convergence ? "convergence (k1 > k2 + k3)" : "escape (k1 < k2 + k3)";
    rep["seeds"] = seeds;
    rep["tmax"] = tmax;
    rep["seed"] = seed;
    if (study_convergence) {
        rep["convergence_radius"] = conv_radius;
        rep["fraction_converged"] = static_cast<double>(converged) / seeds;
    } else {
        rep["escape_norm"] = escape_norm;
        rep["fraction_escaped"] = static_cast<double>(escaped) / seeds;
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::string curves = "seed,t,metric\n";
        for (size_t i = 0; i < outcomes.size(); ++i) {
            std::istringstream lines(outcomes[i].curve);
            std::string line;
            while (std::getline(lines, line)) curves += std::to_string(i) + "," + line + "\n";
        }
        write_file(fs::path(out_dir) / "curves.csv", curves);
        rep["curves"] = (fs::path(out_dir) / "curves.csv").string();
    }
    std::cout << rep.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"center-dynamics toolkit for mass-action reaction networks"};
    app.require_subcommand(1);

    std::string network_flag = "builtin:paper4";
    std::string kappa_flag = "2,1,1,1";
    std::string rates_flag, y0_flag, out_dir, out_file;
    bool as_json = false, assume_center = false, guard = false;
    double tmax = 100.0, rtol = 1e-10, atol = 1e-12;
    int dense = 0;
    unsigned seed = 0;

    auto* parse = app.add_subcommand("parse", "parse a network and print its canonical form");
    parse->add_option("--network", network_flag, "path to a .crn file or builtin:NAME")->required();
    parse->add_flag("--json", as_json, "emit the JSON export instead of the DSL");

    auto* classify = app.add_subcommand("classify", "equilibrium and stability report (JSON)");
    classify->add_option("--kappa", kappa_flag, "rate constants k1,k2,k3,k4")->required();
    classify->add_flag("--assume-center", assume_center, "substitute k1 := k2 + k3");

    auto* simulate = app.add_subcommand("simulate", "integrate a network and report conserved drifts");
    simulate->add_option("--network", network_flag, "path to a .crn file or builtin:NAME");
    simulate->add_option("--kappa", kappa_flag, "positional rates k1,k2,...");
    simulate->add_option("--rates", rates_flag, "named rates sym=value,...");
    simulate->add_option("--y0", y0_flag, "initial state (default all ones)");
    simulate->add_option("--tmax", tmax, "integration horizon");
    simulate->add_option("--rtol", rtol, "relative tolerance");
    simulate->add_option("--atol", atol, "absolute tolerance");
    simulate->add_option("--dense", dense, "resample N equispaced points");
    simulate->add_option("--out", out_dir, "output directory (default: CSV to stdout)");
    simulate->add_option("--seed", seed, "recorded in outputs for reproducibility bookkeeping");
    simulate->add_flag("--assume-center", assume_center, "substitute k1 := k2 + k3");
    simulate->add_flag("--positivity-guard", guard, "reject steps leaving the nonnegative orthant");

    double qmin = 0.05, qmax = 4.0;
    int qcount = 16, samples = 256;
    auto* manifold = app.add_subcommand("manifold", "construct the center manifold mesh and plots");
    manifold->add_option("--kappa", kappa_flag, "rate constants k1,k2,k3,k4");
    manifold->add_flag("--assume-center", assume_center, "substitute k1 := k2 + k3");
    manifold->add_option("--qmin", qmin, "smallest section height");
    manifold->add_option("--qmax", qmax, "largest section height");
    manifold->add_option("--qcount", qcount, "number of log-spaced levels");
    manifold->add_option("--samples", samples, "points per orbit");
    manifold->add_option("--rtol", rtol, "relative tolerance");
    manifold->add_option("--atol", atol, "absolute tolerance");
    manifold->add_option("--out", out_dir, "output directory")->required();

    double tau_min = -8.0, tau_max = 8.0;
    int bsamples = 1601;
    auto* boundary = app.add_subcommand("boundary", "facet phase portrait and the boundary curve");
    boundary->add_option("--kappa", kappa_flag, "rate constants k1,k2,k3,k4");
    boundary->add_flag("--assume-center", assume_center, "substitute k1 := k2 + k3");
    boundary->add_option("--tau-min", tau_min, "left end of the tau grid");
    boundary->add_option("--tau-max", tau_max, "right end of the tau grid");
    boundary->add_option("--samples", bsamples, "samples per curve");
    boundary->add_option("--out", out_dir, "output directory")->required();

    double k1_min = 1.8, k1_max = 2.2, k1_step = 0.1;
    int returns = 10;
    auto* scan = app.add_subcommand("scan", "bifurcation scan over k1 (CSV)");
    scan->add_option("--kappa", kappa_flag, "base rates; k1 is replaced by the scan value");
    scan->add_option("--k1-min", k1_min, "scan start");
    scan->add_option("--k1-max", k1_max, "scan end (inclusive)");
    scan->add_option("--k1-step", k1_step, "scan step");
    scan->add_option("--returns", returns, "section returns per amplitude trend");
    scan->add_option("--out", out_file, "output CSV (default stdout)");

    auto* verify = app.add_subcommand("verify", "run the full acceptance battery");

    int seeds = 100;
    double conv_radius = 1e-4, escape_norm = 1e6;
    auto* experiment = app.add_subcommand("experiment",
                                          "empirical convergence/escape study away from the center");
    experiment->add_option("--kappa", kappa_flag, "rate constants k1,k2,k3,k4");
    experiment->add_option("--seeds", seeds, "ensemble size");
    experiment->add_option("--tmax", tmax, "horizon per seed");
    experiment->add_option("--seed", seed, "RNG seed");
    experiment->add_option("--conv-radius", conv_radius, "distance counted as converged");
    experiment->add_option("--escape-norm", escape_norm, "sup-norm counted as escaped");
    experiment->add_option("--out", out_dir, "output directory for decay/growth curves");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*parse) return cmd_parse(network_flag, as_json);
        if (*classify) return cmd_classify(kappa_flag, assume_center);
        if (*simulate)
            return cmd_simulate(network_flag, kappa_flag, rates_flag, y0_flag, tmax, rtol, atol, dense,
                                out_dir, assume_center, guard);
        if (*manifold)
            return cmd_manifold(kappa_flag, assume_center, qmin, qmax, qcount, samples, rtol, atol,
                                out_dir);
        if (*boundary)
            return cmd_boundary(kappa_flag, assume_center, tau_min, tau_max, bsamples, out_dir);
        if (*scan) return cmd_scan(kappa_flag, k1_min, k1_max, k1_step, returns, out_file);
        if (*verify) return cmd_verify(argv[0]);
        if (*experiment)
            return cmd_experiment(kappa_flag, seeds, tmax, seed, conv_radius, escape_norm, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
