// Copyright 2026 The ssr-telescopy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ssrt/cli.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssrt/ancilla.h"
#include "ssrt/bounds.h"
#include "ssrt/error.h"
#include "ssrt/estimation.h"
#include "ssrt/teleport.h"

namespace ssrt {

using nlohmann::json;

std::string to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::csv:
            return "csv";
        case OutputFormat::json:
            return "json";
        case OutputFormat::svg:
            return "svg";
    }
    return "csv";
}

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    if (name == "svg") return OutputFormat::svg;
    throw InvalidArgument("unknown output format '" + name + "' (expected csv, json or svg)");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

// --------------------------------------------------------------- RunConfig

void RunConfig::validate() const {
    bool known = false;
    for (const auto& c : cli_commands()) known = known || c == command;
    if (!known) throw InvalidArgument("unknown command '" + command + "'");
    source.validate();
    if (photons < 0) throw InvalidArgument("--photons must be non-negative");
    if (command == "fig2" && (photons < 1 || photons > 30)) throw InvalidArgument("fig2 needs 1 <= --photons <= 30");
    if (mean_photons && *mean_photons < 0.0) throw InvalidArgument("--mean-photons must be non-negative");
    if (samples < 1) throw InvalidArgument("--samples must be >= 1");
    if (repetitions < 2) throw InvalidArgument("--repetitions must be >= 2");
    if (ancilla == "custom" && ancilla_file.empty() && (command == "teleport" || command == "estimate"))
        throw InvalidArgument("custom ancilla needs --ancilla-file");
    if (format == OutputFormat::svg && command != "fig2") throw InvalidArgument("svg output is only available for fig2");
}

namespace {

json config_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["ancilla"] = c.ancilla;
    j["ancilla_file"] = c.ancilla_file;
    j["photons"] = c.photons;
    j["mean_photons"] = c.mean_photons ? json(*c.mean_photons) : json(nullptr);
    j["epsilon"] = c.source.epsilon;
    j["g"] = c.source.g_mod;
    j["theta"] = c.source.theta;
    j["samples"] = c.samples;
    j["repetitions"] = c.repetitions;
    j["seed"] = c.seed;
    j["format"] = to_string(c.format);
    j["out"] = c.out;
    return j;
}

RunConfig config_from(const json& j) {
    RunConfig c;
    try {
        if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
        c.command = j.value("command", c.command);
        c.ancilla = j.value("ancilla", c.ancilla);
        c.ancilla_file = j.value("ancilla_file", c.ancilla_file);
        c.photons = j.value("photons", c.photons);
        if (j.contains("mean_photons") && !j["mean_photons"].is_null()) c.mean_photons = j["mean_photons"].get<double>();
        c.source.epsilon = j.value("epsilon", c.source.epsilon);
        c.source.g_mod = j.value("g", c.source.g_mod);
        c.source.theta = j.value("theta", c.source.theta);
        c.samples = j.value("samples", c.samples);
        c.repetitions = j.value("repetitions", c.repetitions);
        c.seed = j.value("seed", c.seed);
        c.format = parse_output_format(j.value("format", to_string(c.format)));
        c.out = j.value("out", c.out);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed config: ") + e.what());
    }
    return c;
}

}  // namespace

std::string RunConfig::to_json() const { return config_json(*this).dump(); }

RunConfig RunConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config does not parse: ") + e.what());
    }
    return config_from(j);
}

// ------------------------------------------------------------------ output

namespace {

struct Table {
    std::vector<std::string> columns;
    std::vector<json> rows;  // objects keyed by column
};

std::string cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_number(v.get<double>());
    return v.dump();
}

std::string render_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << cell(r.value(t.columns[i], json()));
        os << '\n';
    }
    return os.str();
}

json table_json(const Table& t) {
    json j;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    return j;
}

std::string render_report(const RunConfig& cfg, const json& results) {
    json j;
    j["config"] = config_json(cfg);
    j["results"] = results;
    return j.dump(2) + "\n";
}

// key,value rows for scalar entries of a results object.
std::string render_scalars_csv(const json& results) {
    std::ostringstream os;
    os << "key,value\n";
    for (auto it = results.begin(); it != results.end(); ++it)
        if (it.value().is_primitive()) os << it.key() << ',' << cell(it.value()) << '\n';
    return os.str();
}

std::string render_svg(const Table& t, const std::string& x_col, const std::vector<std::string>& series) {
    const double w = 640, h = 420, left = 60, right = 170, top = 20, bottom = 50;
    double xmin = 1e300, xmax = -1e300;
    for (const auto& r : t.rows) {
        double x = r.at(x_col).get<double>();
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    if (xmax <= xmin) xmax = xmin + 1;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (w - left - right); };
    auto py = [&](double y) { return top + (1.0 - y) * (h - top - bottom); };
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#000000"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
       << ' ' << h << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << w - right << "\" y2=\"" << py(0)
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << left << "\" y2=\"" << py(1)
       << "\" stroke=\"black\"/>\n";
    for (double y : {0.0, 0.5, 1.0})
        os << "<text x=\"" << left - 8 << "\" y=\"" << py(y) + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
           << format_number(y) << "</text>\n";
    os << "<text x=\"" << px(xmin) << "\" y=\"" << h - bottom + 16 << "\" font-size=\"11\">" << format_number(xmin)
       << "</text>\n";
    os << "<text x=\"" << px(xmax) << "\" y=\"" << h - bottom + 16 << "\" font-size=\"11\" text-anchor=\"end\">"
       << format_number(xmax) << "</text>\n";
    os << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 12 << "\" font-size=\"12\" text-anchor=\"middle\">"
       << x_col << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % 7];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& r : t.rows) {
            const json& v = r.value(series[s], json());
            if (!v.is_number()) continue;
            os << (first ? "" : " ") << format_number(px(r.at(x_col).get<double>())) << ','
               << format_number(py(v.get<double>()));
            first = false;
        }
        os << "\"/>\n";
        os << "<text x=\"" << w - right + 10 << "\" y=\"" << top + 16 * (s + 1) << "\" font-size=\"11\" fill=\"" << color
           << "\">" << series[s] << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_table(const RunConfig& cfg, const Table& t) {
    if (cfg.format == OutputFormat::json) return render_report(cfg, table_json(t));
    return render_csv(t);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AncillaSpec resolve_ancilla(const RunConfig& cfg) {
    if (cfg.ancilla == "custom") return spec_from_json(read_file(cfg.ancilla_file));
    BuildParams bp;
    bp.photons = cfg.photons;
    const AncillaKind kind = parse_ancilla_kind(cfg.ancilla);
    if (kind == AncillaKind::tmsv || kind == AncillaKind::tmsv_with_reference) {
        bp.squeezing = squeezing_for_mean(cfg.photons);
        bp.alpha = std::sqrt(cfg.photons / 2.0);
    }
    if (kind == AncillaKind::coherent_pair) bp.alpha = std::sqrt(cfg.photons / 2.0);
    return build(kind, bp);
}

// Numeric ratio: end-to-end when the ancilla fits in the simulator,
// otherwise the sector-sum formula.
double numeric_ratio(const AncillaSpec& spec, const SourceParams& p) {
    int top = 0;
    for (const auto& [l, _] : spec.amplitudes) top = std::max(top, l.n_a + l.n_b);
    if (top + 1 <= kMaxPhotons && spec.modes_per_site() + 1 <= kMaxModesPerSite)
        return qfi_ratio_end_to_end(spec, p).ratio;
    return qfi_ratio_closed(spec);
}

// ----------------------------------------------------------------- commands

std::string cmd_table1(const RunConfig& cfg) {
    const int n = std::max(cfg.photons, 1);
    Table t;
    t.columns = {"kind", "N", "closed_ratio", "numeric_ratio", "bound", "NL", "PR"};
    auto add = [&](const std::string& kind, int big_n, double closed, double numeric, double bound, bool nl, bool pr) {
        t.rows.push_back({{"kind", kind},
                          {"N", big_n},
                          {"closed_ratio", closed},
                          {"numeric_ratio", numeric},
                          {"bound", bound},
                          {"NL", nl},
                          {"PR", pr}});
    };
    const SourceParams& p = cfg.source;
    {
        AncillaSpec s = build(AncillaKind::gjc, {});
        add("gjc", 1, closed_ratio(AncillaKind::gjc, {}), numeric_ratio(s, p), bound_max_photons(1), true, true);
    }
    for (AncillaKind k : {AncillaKind::n_copy_spe, AncillaKind::klm, AncillaKind::optimal_klm}) {
        BuildParams bp;
        bp.photons = n;
        AncillaSpec s = build(k, bp);
        add(to_string(k), n, closed_ratio(k, bp), numeric_ratio(s, p), bound_max_photons(n), true, true);
    }
    {
        // Squeezed pair with mean N plus a reference pair with |alpha|^2 = N/2 per mode.
        BuildParams bp;
        bp.photons = n;
        bp.squeezing = squeezing_for_mean(n);
        bp.alpha = std::sqrt(n / 2.0);
        AncillaSpec s = build(AncillaKind::tmsv_with_reference, bp);
        const FisherPair cv = cv_fi_closed(p.epsilon, p.g_mod, bp.squeezing);
        const double lower = p.g_mod > 0.0 ? cv.f_theta / optimal_qfi_value(p, Parameter::theta)
                                           : cv.f_gmod / optimal_qfi_value(p, Parameter::g_mod);
        add("tmsv_with_reference", n, lower, qfi_ratio_closed(s), bound_mean_photons(s.mean_photons()), true, true);
    }
    {
        BuildParams bp;
        bp.photons = n;
        bp.alpha = std::sqrt(n / 2.0);
        AncillaSpec s = build(AncillaKind::coherent_pair, bp);
        add("coherent_pair", n, closed_ratio(AncillaKind::coherent_pair, bp), numeric_ratio(s, p),
            bound_mean_photons(n), false, true);
    }
    {
        AncillaSpec s = build(AncillaKind::tpe, {});
        add("tpe", 2, closed_ratio(AncillaKind::tpe, {}), numeric_ratio(s, p), bound_max_photons(2), true, false);
    }
    return render_table(cfg, t);
}

std::string cmd_fig2(const RunConfig& cfg) {
    Table t;
    t.columns = {"N", "n_copy_spe", "klm", "tri_intensity", "tri_amplitude", "optimal_klm", "bound"};
    for (int n = 1; n <= cfg.photons; ++n) {
        BuildParams bp;
        bp.photons = n;
        json row = {{"N", n}, {"bound", bound_max_photons(n)}};
        for (AncillaKind k : {AncillaKind::n_copy_spe, AncillaKind::klm, AncillaKind::optimal_klm})
            row[to_string(k)] = qfi_ratio_closed(build(k, bp));
        for (AncillaKind k : {AncillaKind::tri_intensity, AncillaKind::tri_amplitude})
            row[to_string(k)] = n >= 2 ? json(qfi_ratio_closed(build(k, bp))) : json(nullptr);
        t.rows.push_back(row);
    }
    if (cfg.format == OutputFormat::svg)
        return render_svg(t, "N", {"n_copy_spe", "tri_intensity", "tri_amplitude", "optimal_klm", "bound"});
    return render_table(cfg, t);
}

json setting_json(const std::vector<MeasurementSetting>& s) {
    json a = json::array();
    for (const auto& m : s) a.push_back({{"alpha", m.alpha}, {"delta", m.delta}});
    return a;
}

std::string cmd_teleport(const RunConfig& cfg) {
    const AncillaSpec spec = resolve_ancilla(cfg);
    const SourceParams& p = cfg.source;
    const PipelineResult pipe = simulate_pipeline(spec, p);
    const auto sg = optimal_settings(Parameter::g_mod, spec, p);
    const auto st = optimal_settings(Parameter::theta, spec, p);
    const FisherReport fi = fisher_information_pipeline(pipe, p, sg, st);
    const FisherReport fc = fisher_information(spec, p);
    json r;
    r["photons"] = pipe.photons;
    r["fi_gmod"] = fi.f_gmod;
    r["fi_theta"] = fi.f_theta;
    r["fi_ratio_gmod"] = fi.ratio_gmod ? json(*fi.ratio_gmod) : json(nullptr);
    r["fi_ratio_theta"] = fi.ratio_theta ? json(*fi.ratio_theta) : json(nullptr);
    double ratio = 0.0;
    if (fi.ratio_gmod && fi.ratio_theta)
        ratio = std::min(*fi.ratio_gmod, *fi.ratio_theta);
    else
        ratio = fi.ratio_gmod ? *fi.ratio_gmod : *fi.ratio_theta;
    r["fi_ratio"] = ratio;
    r["fi_ratio_closed_formula"] = fc.ratio_theta ? *fc.ratio_theta : *fc.ratio_gmod;
    r["qfi_ratio"] = qfi_ratio_closed(spec);
    r["failure_probability"] = failure_probability(spec);
    r["max_identity_error"] = pipe.max_identity_error;
    r["max_expansion_error"] = pipe.max_expansion_error;
    r["max_reconstruction_error"] = pipe.max_reconstruction_error;
    r["branches"] = pipe.branches.size();
    r["settings_gmod"] = setting_json(sg);
    r["settings_theta"] = setting_json(st);
    json sectors = json::array();
    for (const auto& cs : pipe.sectors) sectors.push_back({{"n", cs.sector}, {"weight", cs.weight}, {"failure", cs.failure}});
    r["sectors"] = sectors;
    if (cfg.format == OutputFormat::csv) return render_scalars_csv(r);
    return render_report(cfg, r);
}

std::string cmd_estimate(const RunConfig& cfg) {
    const AncillaSpec spec = resolve_ancilla(cfg);
    MonteCarloConfig mc;
    mc.trials = cfg.samples;
    mc.repetitions = cfg.repetitions;
    mc.seed = cfg.seed;
    const EstimateReport rep = run_monte_carlo(spec, cfg.source, mc);
    auto mat = [](const Eigen::Matrix2d& m) { return json{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}; };
    json r;
    r["g_hat"] = rep.g_hat;
    r["theta_hat"] = rep.theta_hat;
    r["var_g"] = rep.covariance(0, 0);
    r["var_theta"] = rep.covariance(1, 1);
    r["crb_g"] = rep.crb(0, 0);
    r["crb_theta"] = rep.crb(1, 1);
    r["ratio"] = rep.ratio;
    r["ratio_gmod"] = rep.ratio_gmod;
    r["wide_intervals"] = rep.wide_intervals;
    r["covariance"] = mat(rep.covariance);
    r["crb"] = mat(rep.crb);
    if (cfg.format == OutputFormat::csv) return render_scalars_csv(r);
    return render_report(cfg, r);
}

std::string cmd_optimize(const RunConfig& cfg) {
    if (cfg.photons < 1) throw InvalidArgument("optimize needs --photons >= 1");
    OptimizerConfig oc;
    oc.seed = cfg.seed;
    const MaxResult m = maximize_h_simplex(cfg.photons, oc);
    json r;
    r["k"] = cfg.photons;
    r["value"] = m.value;
    r["bound"] = bound_max_photons(cfg.photons);
    r["asymptotic"] = cfg.photons >= 3 ? json(asymptotic_bound(cfg.photons)) : json(nullptr);
    r["optimal_klm"] = harmonic_sum(tridiag_max_eig(cfg.photons).vector.weights);
    r["stationarity"] = m.stationarity;
    r["warning"] = m.warning;
    r["weights"] = m.argmax.weights;
    if (cfg.format == OutputFormat::csv) return render_scalars_csv(r);
    return render_report(cfg, r);
}

std::string cmd_bound(const RunConfig& cfg) {
    json r;
    if (cfg.mean_photons) {
        r["mean_photons"] = *cfg.mean_photons;
        r["bound"] = bound_mean_photons(*cfg.mean_photons);
        r["small_photon_bound"] = small_photon_bound(*cfg.mean_photons);
    } else {
        r["photons"] = cfg.photons;
        r["bound"] = bound_max_photons(cfg.photons);
        r["asymptotic"] = cfg.photons >= 3 ? json(asymptotic_bound(cfg.photons)) : json(nullptr);
    }
    if (cfg.format == OutputFormat::csv) return render_scalars_csv(r);
    return render_report(cfg, r);
}

}  // namespace

std::string run_command(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.command == "table1") return cmd_table1(cfg);
    if (cfg.command == "fig2") return cmd_fig2(cfg);
    if (cfg.command == "teleport") return cmd_teleport(cfg);
    if (cfg.command == "estimate") return cmd_estimate(cfg);
    if (cfg.command == "optimize") return cmd_optimize(cfg);
    return cmd_bound(cfg);
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fisher information of two-telescope interferometry under photon-number superselection"};
    std::string command, config_path, ancilla, ancilla_file, format, out_path;
    int photons = 0, repetitions = 0;
    double g = 0, theta = 0, epsilon = 0, mean = 0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    app.add_option("command", command, "table1 | fig2 | teleport | estimate | optimize | bound")->required();
    auto* o_config = app.add_option("--config", config_path, "JSON config file; flags override it");
    auto* o_ancilla = app.add_option("--ancilla", ancilla, "ancilla kind");
    auto* o_afile = app.add_option("--ancilla-file", ancilla_file, "custom ancilla JSON");
    auto* o_photons = app.add_option("--photons", photons, "ancilla photon number N (fig2: largest N)");
    auto* o_mean = app.add_option("--mean-photons", mean, "mean photon number (bound)");
    auto* o_g = app.add_option("--g", g, "|g|");
    auto* o_theta = app.add_option("--theta", theta, "theta in radians");
    auto* o_eps = app.add_option("--epsilon", epsilon, "mean photon number of the source per mode pair");
    auto* o_samples = app.add_option("--samples", samples, "trials M per setting");
    auto* o_reps = app.add_option("--repetitions", repetitions, "Monte Carlo repetitions");
    auto* o_seed = app.add_option("--seed", seed, "random seed");
    auto* o_format = app.add_option("--format", format, "csv | json | svg");
    auto* o_out = app.add_option("--out", out_path, "output file (default stdout)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    (void)o_config;

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = RunConfig::from_json(read_file(config_path));
        cfg.command = command;
        if (*o_ancilla) cfg.ancilla = ancilla;
        if (*o_afile) cfg.ancilla_file = ancilla_file;
        if (*o_photons) cfg.photons = photons;
        if (*o_mean) cfg.mean_photons = mean;
        if (*o_g) cfg.source.g_mod = g;
        if (*o_theta) cfg.source.theta = theta;
        if (*o_eps) cfg.source.epsilon = epsilon;
        if (*o_samples) cfg.samples = samples;
        if (*o_reps) cfg.repetitions = repetitions;
        if (*o_seed) cfg.seed = seed;
        if (*o_format) cfg.format = parse_output_format(format);
        else if (config_path.empty() && command != "table1" && command != "fig2") cfg.format = OutputFormat::json;
        if (*o_out) cfg.out = out_path;

        const std::string text = run_command(cfg);
        if (cfg.out.empty()) {
            out << text;
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            if (!f) throw IoError("cannot write '" + cfg.out + "'");
            f << text;
            if (!f) throw IoError("write to '" + cfg.out + "' failed");
        }
        return 0;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace ssrt
