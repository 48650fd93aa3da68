// line-scatter: CLI front end for the delta-line scattering solvers.
//
// Usage: line-scatter <task> --config <file> [--out <path>] [--format csv|json]
// Tasks: amplitude, beams, scan-k, scan-theta0, singularities, verify, equivalence.
//
// Output determinism contract: identical configs produce byte-identical files
// (17 significant digits, fixed column order, LF line endings). Scans shard
// grid points across threads and merge in index order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "linescatter/foldy.hpp"
#include "linescatter/fourier.hpp"
#include "linescatter/geometry.hpp"
#include "linescatter/json_io.hpp"
#include "linescatter/oracle.hpp"

namespace ls = linescatter;
using ls::cdouble;
using ls::json;

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ScanRange {
    double start = 0.0;
    double stop = 0.0;
    int count = 0; // grid points, endpoints inclusive

    std::vector<double> grid() const {
        std::vector<double> g(count);
        for (int i = 0; i < count; ++i)
            g[i] = count == 1 ? start
                              : start + (stop - start) * static_cast<double>(i) / (count - 1);
        return g;
    }
};

struct RunConfig {
    ls::PotentialDescriptor potential;
    std::optional<ls::PotentialDescriptor> potential_b;
    std::optional<ls::IncidentWave> wave;
    std::optional<ScanRange> k_range;
    std::optional<ScanRange> theta0_range; // degrees, as in the file
    double k_fixed = 0.0;
    double theta0_fixed = 0.0; // radians
    std::string task;
    std::string out_path;
    std::string format = "csv";
    int theta_samples = 360;
    double singularity_threshold = 1e-8;
    std::optional<int> truncation;
    double tolerance = 1e-12;
    int max_terms = 200;
};

ScanRange parse_range(const json& doc) {
    ScanRange r;
    r.start = doc.at("start").get<double>();
    r.stop = doc.at("stop").get<double>();
    r.count = doc.at("count").get<int>();
    if (r.count < 1) throw ls::InvalidConfig("scan range: count must be positive");
    if (!(r.stop >= r.start)) throw ls::InvalidConfig("scan range: stop must be >= start");
    return r;
}

RunConfig load_config(const std::string& path, const std::string& task,
                      const std::string& out_override, const std::string& format_override) {
    std::ifstream in(path);
    if (!in) throw ls::InvalidConfig("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ls::InvalidConfig(std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig cfg;
    cfg.task = task;
    try {
        cfg.potential = ls::parse_potential(doc.at("potential"));
        if (doc.contains("potential_b"))
            cfg.potential_b = ls::parse_potential(doc.at("potential_b"));

        const json& wave = doc.at("wave");
        const json& kj = wave.at("k");
        const json& tj = wave.at("theta0_deg");
        if (kj.is_object()) {
            cfg.k_range = parse_range(kj);
        } else {
            cfg.k_fixed = kj.get<double>();
        }
        if (tj.is_object()) {
            cfg.theta0_range = parse_range(tj);
        } else {
            cfg.theta0_fixed = tj.get<double>() * M_PI / 180.0;
        }
        if (!cfg.k_range && !cfg.theta0_range)
            cfg.wave = ls::IncidentWave{cfg.k_fixed, cfg.theta0_fixed};

        if (doc.contains("output")) {
            const json& out = doc.at("output");
            if (out.contains("path")) cfg.out_path = out.at("path").get<std::string>();
            if (out.contains("format")) cfg.format = out.at("format").get<std::string>();
        }
        if (doc.contains("options")) {
            const json& opt = doc.at("options");
            if (opt.contains("theta_samples")) cfg.theta_samples = opt.at("theta_samples").get<int>();
            if (opt.contains("singularity_threshold"))
                cfg.singularity_threshold = opt.at("singularity_threshold").get<double>();
            if (opt.contains("truncation")) cfg.truncation = opt.at("truncation").get<int>();
            if (opt.contains("tolerance")) cfg.tolerance = opt.at("tolerance").get<double>();
            if (opt.contains("max_terms")) cfg.max_terms = opt.at("max_terms").get<int>();
        }
    } catch (const json::exception& e) {
        throw ls::InvalidConfig(std::string("config field error: ") + e.what());
    }

    if (!out_override.empty()) cfg.out_path = out_override;
    if (!format_override.empty()) cfg.format = format_override;
    if (cfg.format != "csv" && cfg.format != "json")
        throw ls::InvalidConfig("format must be csv or json");
    if (cfg.out_path.empty()) throw ls::InvalidConfig("no output path (config output.path or --out)");
    if (cfg.theta_samples < 1) throw ls::InvalidConfig("theta_samples must be positive");
    return cfg;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string potential_hash(const ls::PotentialDescriptor& p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(ls::serialize_potential(p).dump())));
    return buf;
}

// Resolve a descriptor to the canonical profile the solvers accept. A
// "general" potential goes through the rotation reduction; the reduction can
// push the incidence angle out of the left-incident regime, which is an error
// at the CLI level (the user has to re-parameterize the incident direction).
struct Resolved {
    ls::Profile profile;
    ls::IncidentWave wave;
};

Resolved resolve(const ls::PotentialDescriptor& desc, const ls::IncidentWave& wave) {
    if (const auto* gen = std::get_if<ls::GeneralLinePotential>(&desc)) {
        const ls::CanonicalReduction red = ls::reduce(*gen, wave);
        if (!red.within_left_incidence)
            throw ls::ScatterError(
                "IncidenceOutOfRange",
                "rotation reduction moves the incidence angle outside (-pi/2, pi/2); "
                "re-parameterize the incident direction");
        return {red.profile, red.wave};
    }
    if (const auto* arr = std::get_if<ls::DeltaLineArray>(&desc)) return {*arr, wave};
    if (const auto* four = std::get_if<ls::FourierLinePotential>(&desc)) return {*four, wave};
    return {std::get<ls::PeriodicComb>(desc), wave};
}

ls::DiscreteAmplitude beams_for(const ls::Profile& profile, const ls::IncidentWave& wave,
                                std::optional<int> truncation) {
    if (const auto* comb = std::get_if<ls::PeriodicComb>(&profile))
        return ls::comb_beams(*comb, wave, truncation);
    if (const auto* four = std::get_if<ls::FourierLinePotential>(&profile))
        return ls::solve_beams(*four, wave);
    throw ls::InvalidConfig("task needs a fourier or comb potential (delta arrays scatter "
                            "into a smooth amplitude; use the amplitude task)");
}

ls::ScaledComplex determinant_at(const ls::Profile& profile, const ls::IncidentWave& wave) {
    if (const auto* arr = std::get_if<ls::DeltaLineArray>(&profile)) {
        const ls::FoldySystem sys = ls::build_system(*arr, wave);
        return ls::determinant(sys.matrix);
    }
    const ls::FourierLinePotential four = [&] {
        if (const auto* comb = std::get_if<ls::PeriodicComb>(&profile))
            return ls::comb_to_fourier(*comb, ls::required_truncation(*comb, wave));
        return std::get<ls::FourierLinePotential>(profile);
    }();
    if (four.frequencies.empty()) {
        ls::ComplexMatrix a(1, 1);
        a.at(0, 0) = 1.0 + cdouble(0.0, 1.0) * four.coupling(0) / (2.0 * wave.omega0());
        return ls::determinant(a);
    }
    const ls::CommensurateBase base = ls::commensurate_base(four);
    const ls::ModeSet modes = ls::enumerate_modes(base.base, wave);
    const ls::ModeSystem sys = ls::build_mode_system(four, base, modes, wave);
    return ls::determinant(sys.matrix);
}

// Grid points sharded across threads, merged in index order.
template <typename F>
auto parallel_map(int n, F&& f) -> std::vector<decltype(f(0))> {
    using R = decltype(f(0));
    std::vector<R> out(n);
    const int threads =
        std::max(1, std::min<int>(static_cast<int>(std::thread::hardware_concurrency()), n));
    std::vector<std::future<void>> futures;
    for (int t = 0; t < threads; ++t) {
        futures.push_back(std::async(std::launch::async, [&, t] {
            for (int i = t; i < n; i += threads) out[i] = f(i);
        }));
    }
    for (auto& fu : futures) fu.get();
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ls::InvalidConfig("cannot open output file: " + path);
    out << content;
}

std::string csv_meta(const RunConfig& cfg, const std::vector<std::string>& extra = {}) {
    std::ostringstream os;
    if (cfg.wave) {
        os << "# k = " << num(cfg.wave->k) << "\n";
        os << "# theta0_deg = " << num(cfg.wave->theta0 * 180.0 / M_PI) << "\n";
    }
    os << "# potential_hash = " << potential_hash(cfg.potential) << "\n";
    for (const std::string& line : extra) os << "# " << line << "\n";
    return os.str();
}

struct TableRow {
    std::vector<double> values;
};

std::string emit_table(const RunConfig& cfg, const std::vector<std::string>& columns,
                       const std::vector<TableRow>& rows,
                       const std::vector<std::string>& meta_extra = {},
                       const json* attachments = nullptr) {
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << csv_meta(cfg, meta_extra);
        for (size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
        os << "\n";
        for (const TableRow& r : rows) {
            for (size_t c = 0; c < r.values.size(); ++c) os << (c ? "," : "") << num(r.values[c]);
            os << "\n";
        }
        return os.str();
    }
    json doc;
    doc["task"] = cfg.task;
    if (cfg.wave) doc["wave"] = ls::serialize_wave(*cfg.wave);
    doc["potential_hash"] = potential_hash(cfg.potential);
    doc["columns"] = columns;
    doc["rows"] = json::array();
    for (const TableRow& r : rows) doc["rows"].push_back(r.values);
    if (attachments)
        for (const auto& [key, value] : attachments->items()) doc[key] = value;
    return doc.dump(2) + "\n";
}

void run_amplitude(const RunConfig& cfg) {
    if (!cfg.wave) throw ls::InvalidConfig("amplitude task needs a scalar wave");
    const Resolved res = resolve(cfg.potential, *cfg.wave);
    const auto* arr = std::get_if<ls::DeltaLineArray>(&res.profile);
    if (!arr)
        throw ls::InvalidConfig("amplitude task needs a delta_array potential; fourier and "
                                "comb potentials scatter into discrete beams");
    const ls::SmoothAmplitude f = ls::solve_amplitude(*arr, res.wave);

    std::vector<TableRow> rows;
    for (int i = 0; i < cfg.theta_samples; ++i) {
        const double theta_deg = -90.0 + 360.0 * static_cast<double>(i) / cfg.theta_samples;
        const cdouble v = f(theta_deg * M_PI / 180.0);
        rows.push_back({{theta_deg, v.real(), v.imag(), std::norm(v)}});
    }
    write_file(cfg.out_path,
               emit_table(cfg, {"theta_deg", "re_f", "im_f", "abs_f_sq"}, rows));
}

void run_beams(const RunConfig& cfg) {
    if (!cfg.wave) throw ls::InvalidConfig("beams task needs a scalar wave");
    const Resolved res = resolve(cfg.potential, *cfg.wave);
    const ls::DiscreteAmplitude amp = beams_for(res.profile, res.wave, cfg.truncation);

    // The distributional prefactor -i/sqrt(2 pi) of the beam sum is folded
    // into re_y/im_y so |y|^2 is comparable with the amplitude task.
    const cdouble prefactor = cdouble(0.0, -1.0) / std::sqrt(2.0 * M_PI);
    std::vector<TableRow> rows;
    for (const ls::Beam& b : amp.beams) {
        const cdouble y = prefactor * b.y;
        const double theta_deg = b.theta * 180.0 / M_PI;
        rows.push_back({{static_cast<double>(b.shift), theta_deg, y.real(), y.imag(), std::norm(y)}});
        rows.push_back(
            {{static_cast<double>(b.shift), 180.0 - theta_deg, y.real(), y.imag(), std::norm(y)}});
    }
    write_file(cfg.out_path,
               emit_table(cfg, {"shift", "theta_deg", "re_y", "im_y", "abs_y_sq"}, rows,
                          {"beam coefficients include the -i/sqrt(2*pi) prefactor"}));
}

json candidates_json(const std::vector<double>& grid, const std::vector<double>& mags,
                     double rel_threshold, const std::string& variable) {
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    const double thr = rel_threshold * (median > 0.0 ? median : 1.0);

    json out = json::array();
    for (size_t i = 0; i < mags.size(); ++i) {
        if (mags[i] > thr) continue;
        double refined = grid[i];
        if (i > 0 && i + 1 < mags.size() && mags[i] < mags[i - 1] && mags[i] < mags[i + 1]) {
            const double denom = mags[i - 1] - 2.0 * mags[i] + mags[i + 1];
            if (denom > 0.0)
                refined = grid[i] + 0.5 * (mags[i - 1] - mags[i + 1]) / denom *
                                        (grid[i] - grid[i - 1]);
        }
        json c;
        c[variable] = refined;
        c["abs_det"] = mags[i];
        out.push_back(c);
    }
    return out;
}

void run_scan(const RunConfig& cfg, bool candidates_only) {
    const bool over_k = cfg.task == "scan-k" || (candidates_only && cfg.k_range.has_value());
    if (over_k && !cfg.k_range)
        throw ls::InvalidConfig("scan-k needs wave.k as a {start, stop, count} range");
    if (!over_k && !cfg.theta0_range)
        throw ls::InvalidConfig("scan-theta0 needs wave.theta0_deg as a {start, stop, count} range");

    const std::vector<double> grid = over_k ? cfg.k_range->grid() : cfg.theta0_range->grid();
    const int n = static_cast<int>(grid.size());

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<ls::ScaledComplex> dets = parallel_map(n, [&](int i) -> ls::ScaledComplex {
        try {
            const ls::IncidentWave w =
                over_k ? ls::IncidentWave{grid[i], cfg.theta0_fixed}
                       : ls::IncidentWave{cfg.k_fixed, grid[i] * M_PI / 180.0};
            const Resolved res = resolve(cfg.potential, w);
            return determinant_at(res.profile, res.wave);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return {};
        }
    });
    if (first_error) std::rethrow_exception(first_error);

    std::vector<double> mags;
    mags.reserve(n);
    for (const auto& d : dets) mags.push_back(d.abs());
    const std::string variable = over_k ? "k" : "theta0_deg";
    const json cands = candidates_json(grid, mags, cfg.singularity_threshold, variable);

    if (candidates_only) {
        json doc;
        doc["task"] = cfg.task;
        doc["variable"] = variable;
        doc["potential_hash"] = potential_hash(cfg.potential);
        doc["candidates"] = cands;
        write_file(cfg.out_path, doc.dump(2) + "\n");
        return;
    }

    std::vector<TableRow> rows;
    for (int i = 0; i < n; ++i) {
        const cdouble v = dets[i].value();
        rows.push_back({{grid[i], mags[i], v.real(), v.imag()}});
    }
    json attach;
    attach["candidates"] = cands;
    const std::string table =
        emit_table(cfg, {variable, "abs_det", "re_det", "im_det"}, rows, {}, &attach);
    write_file(cfg.out_path, table);
    if (cfg.format == "csv") {
        json doc;
        doc["candidates"] = cands;
        write_file(cfg.out_path + ".candidates.json", doc.dump(2) + "\n");
    }
}

void run_verify(const RunConfig& cfg) {
    if (!cfg.wave) throw ls::InvalidConfig("verify task needs a scalar wave");
    const Resolved res = resolve(cfg.potential, *cfg.wave);

    json doc;
    doc["task"] = "verify";
    doc["potential_hash"] = potential_hash(cfg.potential);
    doc["wave"] = ls::serialize_wave(res.wave);

    ls::BornSeriesResult born;
    std::vector<cdouble> direct;
    double residual = 0.0;
    if (const auto* arr = std::get_if<ls::DeltaLineArray>(&res.profile)) {
        born = ls::born_series_foldy(*arr, res.wave, cfg.max_terms, cfg.tolerance);
        const ls::FoldySystem sys = ls::build_system(*arr, res.wave);
        direct = ls::solve_dense(sys.matrix, sys.rhs).solution;
        residual = ls::residual_verify(sys, direct);
    } else {
        const ls::FourierLinePotential four = [&] {
            if (const auto* comb = std::get_if<ls::PeriodicComb>(&res.profile))
                return ls::comb_to_fourier(
                    *comb, cfg.truncation.value_or(ls::required_truncation(*comb, res.wave)));
            return std::get<ls::FourierLinePotential>(res.profile);
        }();
        born = ls::born_series_modes(four, res.wave, cfg.max_terms, cfg.tolerance);
        if (four.frequencies.empty()) {
            const ls::ModeSet modes = ls::enumerate_modes(4.0 * res.wave.k, res.wave);
            const ls::ModeSystem sys =
                ls::build_mode_system(four, ls::CommensurateBase{1.0, {}}, modes, res.wave);
            direct = ls::solve_dense(sys.matrix, sys.rhs).solution;
            residual = ls::residual_verify(sys, direct);
        } else {
            const ls::CommensurateBase base = ls::commensurate_base(four);
            const ls::ModeSet modes = ls::enumerate_modes(base.base, res.wave);
            const ls::ModeSystem sys = ls::build_mode_system(four, base, modes, res.wave);
            direct = ls::solve_dense(sys.matrix, sys.rhs).solution;
            residual = ls::residual_verify(sys, direct);
        }
    }

    double max_diff = 0.0;
    const std::vector<cdouble>& limit = born.partial_sums.back();
    for (size_t i = 0; i < direct.size(); ++i)
        max_diff = std::max(max_diff, std::abs(limit[i] - direct[i]));

    doc["converged"] = born.converged;
    doc["terms_used"] = born.terms_used;
    doc["estimated_contraction"] = born.estimated_ratio;
    doc["max_diff_vs_direct"] = max_diff;
    doc["direct_residual"] = residual;
    write_file(cfg.out_path, doc.dump(2) + "\n");
}

void run_equivalence(const RunConfig& cfg) {
    if (!cfg.wave) throw ls::InvalidConfig("equivalence task needs a scalar wave");
    if (!cfg.potential_b)
        throw ls::InvalidConfig("equivalence task needs a second potential (potential_b)");

    const Resolved res_a = resolve(cfg.potential, *cfg.wave);
    const Resolved res_b = resolve(*cfg.potential_b, *cfg.wave);
    const ls::DiscreteAmplitude a = beams_for(res_a.profile, res_a.wave, cfg.truncation);
    const ls::DiscreteAmplitude b = beams_for(res_b.profile, res_b.wave, std::nullopt);

    json beams = json::array();
    double max_diff = 0.0;
    std::vector<int> shifts;
    for (const auto& beam : a.beams) shifts.push_back(beam.shift);
    for (const auto& beam : b.beams)
        if (std::find(shifts.begin(), shifts.end(), beam.shift) == shifts.end())
            shifts.push_back(beam.shift);
    std::sort(shifts.begin(), shifts.end());
    for (int s : shifts) {
        const ls::Beam* ba = a.find(s);
        const ls::Beam* bb = b.find(s);
        const cdouble ya = ba ? ba->y : cdouble(0.0, 0.0);
        const cdouble yb = bb ? bb->y : cdouble(0.0, 0.0);
        const double d = std::abs(ya - yb);
        max_diff = std::max(max_diff, d);
        json row;
        row["shift"] = s;
        row["y_a"] = ls::serialize_complex(ya);
        row["y_b"] = ls::serialize_complex(yb);
        row["abs_diff"] = d;
        beams.push_back(row);
    }

    json doc;
    doc["task"] = "equivalence";
    doc["potential_hash_a"] = potential_hash(cfg.potential);
    doc["potential_hash_b"] = potential_hash(*cfg.potential_b);
    doc["wave"] = ls::serialize_wave(*cfg.wave);
    doc["max_abs_diff"] = max_diff;
    doc["within_tolerance"] = max_diff <= cfg.tolerance;
    doc["beams"] = beams;
    write_file(cfg.out_path, doc.dump(2) + "\n");
}

void run(const RunConfig& cfg) {
    ls::validate([&]() -> ls::Profile {
        if (const auto* gen = std::get_if<ls::GeneralLinePotential>(&cfg.potential)) {
            ls::validate(*gen);
            return gen->profile;
        }
        if (const auto* arr = std::get_if<ls::DeltaLineArray>(&cfg.potential)) return *arr;
        if (const auto* four = std::get_if<ls::FourierLinePotential>(&cfg.potential))
            return *four;
        return std::get<ls::PeriodicComb>(cfg.potential);
    }());

    if (cfg.task == "amplitude") run_amplitude(cfg);
    else if (cfg.task == "beams") run_beams(cfg);
    else if (cfg.task == "scan-k" || cfg.task == "scan-theta0") run_scan(cfg, false);
    else if (cfg.task == "singularities") run_scan(cfg, true);
    else if (cfg.task == "verify") run_verify(cfg);
    else if (cfg.task == "equivalence") run_equivalence(cfg);
    else throw ls::InvalidConfig("unknown task: " + cfg.task);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact 2D scattering for delta-line potentials"};
    app.name("line-scatter");
    std::string task, config_path, out_path, format;
    app.add_option("task", task, "amplitude|beams|scan-k|scan-theta0|singularities|verify|equivalence")
        ->required();
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_path, "output path (overrides config output.path)");
    app.add_option("--format", format, "csv or json (overrides config output.format)");
    CLI11_PARSE(app, argc, argv);

    try {
        run(load_config(config_path, task, out_path, format));
        return 0;
    } catch (const ls::ScatterError& e) {
        json err;
        err["error_kind"] = e.kind();
        err["message"] = e.what();
        err["parameters"] = json::object();
        err["parameters"]["task"] = task;
        err["parameters"]["config"] = config_path;
        if (const auto* ss = dynamic_cast<const ls::SpectralSingularity*>(&e)) {
            err["parameters"]["k"] = ss->k();
            if (ss->has_theta0()) err["parameters"]["theta0_deg"] = ss->theta0() * 180.0 / M_PI;
        }
        std::cout << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err;
        err["error_kind"] = "Internal";
        err["message"] = e.what();
        err["parameters"] = json::object();
        std::cout << err.dump(2) << "\n";
        return 1;
    }
}
