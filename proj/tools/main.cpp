#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aportrait/exponents.hpp"
#include "aportrait/orbit.hpp"
#include "aportrait/portrait.hpp"
#include "aportrait/systems.hpp"

namespace fs = std::filesystem;
using namespace aportrait;

namespace {

struct CommonOpts {
    std::string system;
    std::string config;
    std::vector<std::string> sets;
    std::string seed;
    double T = 0;
    int m = 0;
    double transient = -1;  // negative: per-command default
    double tol_abs = 1e-10;
    double tol_rel = 1e-9;
    double closure_tol = 1e-6;
    double max_time = 2000;
    std::string out = ".";
    std::string views = "xy";
    int workers = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--system", o.system, "System name");
    cmd->add_option("--set", o.sets, "Parameter override key=value (repeatable)");
    cmd->add_option("--seed", o.seed, "Initial state x,y[,z]");
    cmd->add_option("--T", o.T, "Window length / sampling interval");
    cmd->add_option("--m", o.m, "Window / sample-interval count");
    cmd->add_option("--transient", o.transient, "Transient discard before the run");
    cmd->add_option("--tol-abs", o.tol_abs, "Integrator absolute tolerance");
    cmd->add_option("--tol-rel", o.tol_rel, "Integrator relative tolerance");
    cmd->add_option("--closure-tol", o.closure_tol, "Orbit closure tolerance");
    cmd->add_option("--max-time", o.max_time, "Give-up horizon for period detection");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--views", o.views, "Comma list of views: xy,xz,yz,axon");
    cmd->add_option("--workers", o.workers, "Concurrent sweep rows");
    cmd->add_option("--config", o.config, "Config file with key=value lines");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Flat key=value config; command-line flags win key by key.
void apply_config_file(CLI::App* cmd, CommonOpts& o,
                       const std::map<std::string, std::function<void(const std::string&)>>& extra) {
    if (o.config.empty()) {
        if (o.system.empty()) throw std::invalid_argument("--system is required");
        return;
    }
    std::ifstream in(o.config);
    if (!in) throw std::runtime_error("cannot read config file " + o.config);

    auto given = [&](const std::string& flag) {
        const auto* opt = cmd->get_option_no_throw(flag);
        return opt && opt->count() > 0;
    };
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not key=value: '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (given("--" + key)) continue;
        if (key == "system") o.system = value;
        else if (key == "set") o.sets.push_back(value);
        else if (key == "seed") o.seed = value;
        else if (key == "T") o.T = std::stod(value);
        else if (key == "m") o.m = std::stoi(value);
        else if (key == "transient") o.transient = std::stod(value);
        else if (key == "tol-abs") o.tol_abs = std::stod(value);
        else if (key == "tol-rel") o.tol_rel = std::stod(value);
        else if (key == "closure-tol") o.closure_tol = std::stod(value);
        else if (key == "max-time") o.max_time = std::stod(value);
        else if (key == "out") o.out = value;
        else if (key == "views") o.views = value;
        else if (key == "workers") o.workers = std::stoi(value);
        else if (extra.count(key)) extra.at(key)(value);
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
    if (o.system.empty()) throw std::invalid_argument("--system is required");
}

std::map<std::string, double> parse_sets(const std::vector<std::string>& sets) {
    std::map<std::string, double> overrides;
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return overrides;
}

Vec parse_seed(const std::string& text, int dimension) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    if (static_cast<int>(vals.size()) != dimension)
        throw std::invalid_argument("--seed needs " + std::to_string(dimension) + " components");
    return dimension == 3 ? Vec(vals[0], vals[1], vals[2]) : Vec(vals[0], vals[1]);
}

Vec resolve_seed(const CommonOpts& o, const SystemDefinition& sys) {
    return o.seed.empty() ? default_seed(sys) : parse_seed(o.seed, sys.dimension());
}

ToleranceSettings control_of(const CommonOpts& o) {
    ToleranceSettings c;
    c.abs_tol = o.tol_abs;
    c.rel_tol = o.tol_rel;
    return c;
}

std::vector<Method> parse_methods(const std::string& text) {
    std::vector<Method> methods;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "LE_J") methods.push_back(Method::LE_J);
        else if (item == "LE_O") methods.push_back(Method::LE_O);
        else if (item == "LE_V") methods.push_back(Method::LE_V);
        else if (item == "GFE") methods.push_back(Method::GFE);
        else throw std::invalid_argument("unknown method '" + item + "'");
    }
    if (methods.empty()) throw std::invalid_argument("--methods list is empty");
    return methods;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(item);
    return items;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << contents;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void print_report(const ExponentReport& rep) {
    for (Method m : rep.methods) {
        const auto& avg = rep.results.at(m).average;
        std::string line = std::string(method_name(m)) + ":";
        for (int k = 0; k < rep.dimension; ++k) line += " " + fmt6(avg[static_cast<size_t>(k)]);
        line += "  " + rep.signature(m);
        std::cout << line << "\n";
    }
    std::cout << "trace average: " << fmt6(rep.trace_average) << "\n";
}

int cmd_exponents(const CommonOpts& o, const std::string& methods_text) {
    auto sys = lookup_system(o.system, parse_sets(o.sets));
    const Vec seed = resolve_seed(o, sys);
    const auto control = control_of(o);
    const auto methods = parse_methods(methods_text);

    WindowPlan plan;
    Vec start = seed;
    if (o.T > 0) {
        plan.window_length = o.T;
        plan.window_count = std::max(1, o.m);
        plan.transient = o.transient >= 0 ? o.transient : 0.0;
    } else {
        PeriodSearch search;
        search.transient = o.transient >= 0 ? o.transient : 500.0;
        search.closure_tol = o.closure_tol;
        search.max_time = o.max_time;
        search.control = control;
        const auto diag = detect_period(sys, seed, search);
        if (diag.classification != OrbitClass::closed_orbit) {
            std::cerr << "no --T given and the orbit did not close: "
                      << orbit_class_name(diag.classification) << "\n";
            return 1;
        }
        std::cout << "detected period " << fmt6(diag.period) << " (rotation "
                  << diag.rotation_number << "); using T = period, m = 1\n";
        plan.window_length = diag.period;
        plan.window_count = 1;
        plan.transient = 0;
        start = diag.reference_point;
    }

    const auto rep = exponent_suite(sys, start, plan, methods, control);
    fs::create_directories(o.out);
    std::ostringstream csv, json;
    write_report_csv(rep, csv);
    write_report_json(rep, json);
    write_file(fs::path(o.out) / "exponents.csv", csv.str());
    write_file(fs::path(o.out) / "exponents.json", json.str());
    print_report(rep);
    return 0;
}

int cmd_period(const CommonOpts& o, bool crossings_csv) {
    auto sys = lookup_system(o.system, parse_sets(o.sets));
    PeriodSearch search;
    search.transient = o.transient >= 0 ? o.transient : 500.0;
    search.closure_tol = o.closure_tol;
    search.max_time = o.max_time;
    search.control = control_of(o);
    const auto diag = detect_period(sys, resolve_seed(o, sys), search);

    std::cout << "classification: " << orbit_class_name(diag.classification) << "\n";
    if (diag.classification == OrbitClass::closed_orbit) {
        std::cout << "period: " << fmt6(diag.period) << "\n"
                  << "rotation number: " << diag.rotation_number << "\n"
                  << "closure residual: " << fmt6(diag.closure_residual) << "\n";
    }
    if (crossings_csv) {
        fs::create_directories(o.out);
        std::ostringstream csv;
        write_crossings_csv(diag.crossings, sys.dimension(), csv);
        write_file(fs::path(o.out) / "crossings.csv", csv.str());
    }
    return 0;
}

int cmd_portrait(const CommonOpts& o, double scale_rel, double neutral_threshold) {
    auto sys = lookup_system(o.system, parse_sets(o.sets));
    if (!(o.T > 0)) throw std::invalid_argument("portrait needs --T > 0");
    WindowPlan plan;
    plan.window_length = o.T;
    plan.window_count = std::max(0, o.m);
    plan.transient = o.transient >= 0 ? o.transient : 200.0;

    const auto doc = build_portrait(sys, resolve_seed(o, sys), plan,
                                    ScalePolicy{.relative = scale_rel, .absolute = 0},
                                    neutral_threshold, control_of(o));
    fs::create_directories(o.out);
    std::ostringstream json;
    write_document_json(doc, json);
    write_file(fs::path(o.out) / "portrait.json", json.str());
    for (const auto& view_name : split_list(o.views)) {
        const auto svg = render_svg(doc, named_view(view_name));
        write_file(fs::path(o.out) / ("portrait_" + view_name + ".svg"), svg);
    }
    std::cout << "portrait: " << doc.samples.size() << " sample groups, scale "
              << fmt6(doc.scale) << "\n";
    return 0;
}

struct SweepRow {
    double value = 0;
    std::string error;
    std::string classification;
    double period = 0;
    int rotation = 0;
    int cycle_count = 0;
    std::optional<ExponentReport> report;
};

int cmd_sweep(const CommonOpts& o, const std::string& sweep_spec,
              const std::string& methods_text) {
    const auto methods = parse_methods(methods_text);

    std::string key = "value";
    std::vector<double> values;
    if (!sweep_spec.empty()) {
        const auto eq = sweep_spec.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--sweep expects key=v1,v2,...");
        key = sweep_spec.substr(0, eq);
        for (const auto& item : split_list(sweep_spec.substr(eq + 1)))
            values.push_back(std::stod(item));
    }

    const auto base_overrides = parse_sets(o.sets);
    const auto control = control_of(o);

    auto run_row = [&](double value) {
        SweepRow row;
        row.value = value;
        try {
            auto overrides = base_overrides;
            overrides[key] = value;
            auto sys = lookup_system(o.system, overrides);
            const Vec seed = resolve_seed(o, sys);

            PeriodSearch search;
            search.transient = o.transient >= 0 ? o.transient : 500.0;
            search.closure_tol = o.closure_tol;
            search.max_time = o.max_time;
            search.control = control;

            const auto census = count_distinct_cycles(sys, {seed, -seed}, 1e-3, search);
            row.cycle_count = census.count;
            if (!census.representatives.empty()) {
                const auto& rep_orbit = census.representatives.front();
                row.classification = orbit_class_name(rep_orbit.classification);
                row.period = rep_orbit.period;
                row.rotation = rep_orbit.rotation_number;
                WindowPlan plan{0, rep_orbit.period, 1, 0};
                row.report =
                    exponent_suite(sys, rep_orbit.reference_point, plan, methods, control);
            } else {
                row.classification = orbit_class_name(OrbitClass::aperiodic);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        return row;
    };

    // rows run concurrently in batches; output keeps the input order
    std::vector<SweepRow> rows(values.size());
    const size_t workers = static_cast<size_t>(std::max(1, o.workers));
    for (size_t base = 0; base < values.size(); base += workers) {
        std::vector<std::future<SweepRow>> batch;
        for (size_t i = base; i < std::min(values.size(), base + workers); ++i)
            batch.push_back(std::async(std::launch::async, run_row, values[i]));
        for (size_t i = 0; i < batch.size(); ++i) rows[base + i] = batch[i].get();
    }

    std::ostringstream csv;
    csv << key << ",classification,period,rotation,cycle_count";
    for (Method m : methods)
        for (int k = 1; k <= 3; ++k) csv << "," << method_name(m) << "_c" << k;
    csv << ",error\n";
    for (const auto& row : rows) {
        csv << fmt6(row.value) << "," << row.classification << "," << fmt6(row.period) << ","
            << row.rotation << "," << row.cycle_count;
        for (Method m : methods)
            for (int k = 0; k < 3; ++k) {
                csv << ",";
                if (row.report)
                    csv << fmt6(row.report->results.at(m).average[static_cast<size_t>(k)]);
            }
        csv << "," << row.error << "\n";
    }
    fs::create_directories(o.out);
    write_file(fs::path(o.out) / "sweep.csv", csv.str());
    std::cout << "sweep: " << rows.size() << " rows written\n";
    return 0;
}

int cmd_compare(const CommonOpts& o, const std::vector<std::string>& sets2,
                const std::string& component, double span) {
    auto chaotic_sys = lookup_system(o.system, parse_sets(o.sets));
    auto periodic_sys = lookup_system(o.system, parse_sets(sets2.empty() ? o.sets : sets2));

    int comp = -1;
    if (component == "x") comp = 0;
    else if (component == "y") comp = 1;
    else if (component == "z") comp = 2;
    else comp = std::stoi(component);

    PeriodSearch search;
    search.transient = o.transient >= 0 ? o.transient : 2000.0;
    search.closure_tol = o.closure_tol;
    search.max_time = o.max_time;
    search.control = control_of(o);
    const auto diag = detect_period(periodic_sys, resolve_seed(o, periodic_sys), search);
    if (diag.classification != OrbitClass::closed_orbit) {
        std::cerr << "second parameter set yields no closed orbit ("
                  << orbit_class_name(diag.classification) << ")\n";
        return 1;
    }

    const Vec c0 = advance(chaotic_sys, resolve_seed(o, chaotic_sys), 0.0,
                           o.transient >= 0 ? o.transient : 200.0, search.control);
    const auto chaotic = integrate(chaotic_sys, c0, 0.0, span, search.control);
    const auto periodic = integrate(periodic_sys, diag.reference_point, 0.0, span,
                                    search.control);
    const auto align = hidden_structure_compare(chaotic, periodic, comp, diag.period);

    std::ostringstream csv;
    csv << "shift,score,period,rotation\n"
        << fmt6(align.shift) << "," << fmt6(align.score) << "," << fmt6(diag.period) << ","
        << diag.rotation_number << "\n";
    csv << "t,chaotic,periodic_shifted\n";
    for (const auto& p : align.pairs)
        csv << fmt6(p[0]) << "," << fmt6(p[1]) << "," << fmt6(p[2]) << "\n";
    fs::create_directories(o.out);
    write_file(fs::path(o.out) / "compare.csv", csv.str());
    std::cout << "shift: " << fmt6(align.shift) << "\nscore: " << fmt6(align.score) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lyapunov-exponent variants, generalized Floquet exponents and "
                 "attractiveness portraits on a registry of benchmark ODE systems"};
    app.require_subcommand(1);

    CommonOpts exp_opts, per_opts, por_opts, swp_opts, cmp_opts;
    std::string exp_methods = "LE_J,LE_O,LE_V,GFE";
    bool crossings_csv = false;
    double scale_rel = 0.05, neutral_threshold = 1e-9;
    std::string sweep_spec, swp_methods = "LE_J,LE_O,LE_V,GFE";
    std::vector<std::string> sets2;
    std::string component = "x";
    double span = 1000;

    auto* exponents = app.add_subcommand(
        "exponents", "Windowed exponent suite; without --T uses the detected orbit period");
    add_common(exponents, exp_opts);
    exponents->add_option("--methods", exp_methods, "Comma list from LE_J,LE_O,LE_V,GFE");

    auto* period = app.add_subcommand("period", "Closed-orbit detection via Poincare returns");
    add_common(period, per_opts);
    period->add_flag("--crossings-csv", crossings_csv, "Write the section crossings as CSV");

    auto* portrait = app.add_subcommand(
        "portrait", "Attractiveness portrait document plus SVG projections");
    add_common(portrait, por_opts);
    portrait->add_option("--scale-rel", scale_rel,
                         "Longest segment as a fraction of the bounding-box diagonal");
    portrait->add_option("--neutral-threshold", neutral_threshold,
                         "Real-part threshold for neutral polarity");

    auto* sweep = app.add_subcommand("sweep", "Parameter sweep: orbits, cycle counts, exponents");
    add_common(sweep, swp_opts);
    sweep->add_option("--sweep", sweep_spec, "Sweep list key=v1,v2,...");
    sweep->add_option("--methods", swp_methods, "Comma list from LE_J,LE_O,LE_V,GFE");

    auto* compare = app.add_subcommand(
        "compare", "Phase-aligned comparison of a chaotic run against a periodic orbit");
    add_common(compare, cmp_opts);
    compare->add_option("--set2", sets2, "Parameter overrides of the periodic side (repeatable)");
    compare->add_option("--component", component, "Component to compare: x, y, z or index");
    compare->add_option("--span", span, "Comparison span in time units");

    CLI11_PARSE(app, argc, argv);

    try {
        if (exponents->parsed()) {
            apply_config_file(exponents, exp_opts,
                              {{"methods", [&](const std::string& v) { exp_methods = v; }}});
            return cmd_exponents(exp_opts, exp_methods);
        }
        if (period->parsed()) {
            apply_config_file(period, per_opts, {});
            return cmd_period(per_opts, crossings_csv);
        }
        if (portrait->parsed()) {
            apply_config_file(portrait, por_opts,
                              {{"scale-rel", [&](const std::string& v) { scale_rel = std::stod(v); }},
                               {"neutral-threshold",
                                [&](const std::string& v) { neutral_threshold = std::stod(v); }}});
            return cmd_portrait(por_opts, scale_rel, neutral_threshold);
        }
        if (sweep->parsed()) {
            apply_config_file(sweep, swp_opts,
                              {{"sweep", [&](const std::string& v) { sweep_spec = v; }},
                               {"methods", [&](const std::string& v) { swp_methods = v; }}});
            return cmd_sweep(swp_opts, sweep_spec, swp_methods);
        }
        if (compare->parsed()) {
            apply_config_file(compare, cmp_opts,
                              {{"set2", [&](const std::string& v) { sets2.push_back(v); }},
                               {"component", [&](const std::string& v) { component = v; }},
                               {"span", [&](const std::string& v) { span = std::stod(v); }}});
            return cmd_compare(cmp_opts, sets2, component, span);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
