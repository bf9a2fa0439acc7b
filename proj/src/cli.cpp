#include "staypoint/cli.hpp"

#include "staypoint/baselines.hpp"
#include "staypoint/detector.hpp"
#include "staypoint/evaluation.hpp"
#include "staypoint/stay_records.hpp"
#include "staypoint/streaming_detector.hpp"
#include "staypoint/synthetic.hpp"
#include "staypoint/trajectory_io.hpp"

#include "text_util.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace staypoint::cli {

namespace {

// Input problem already reported to the user; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw UsageError("cannot write '" + path + "'");
    return f;
}

std::string where(const std::string& source, const InputError& e)
{
    std::string s = source;
    if (e.line() > 0)
        s += ":" + std::to_string(e.line());
    if (!e.field().empty())
        s += " (" + e.field() + ")";
    return s + ": " + e.what();
}

std::vector<LocationSample> load_samples(const std::string& path, const std::string& format, std::istream& in,
                                         std::ostream& err)
{
    const std::string text = path.empty() || path == "-" ? std::string(std::istreambuf_iterator<char>(in), {})
                                                         : read_file(path);
    const std::string source = path.empty() ? "<stdin>" : path;
    try {
        if (format == "gpx") {
            auto track = parse_gpx(text);
            if (track.skipped_untimed > 0)
                err << source << ": skipped " << track.skipped_untimed << " points without a timestamp\n";
            return std::move(track.samples);
        }
        return parse_trajectory_csv(std::string_view(text));
    } catch (const InputError& e) {
        throw UsageError(where(source, e));
    }
}

struct DetectOptions {
    std::string input;
    std::string format = "csv";
    std::string method = "extrema";
    std::string output_format = "jsonl";
    bool streaming = false;
    bool include_inflections = false;
    bool constant_d1_min = false;
    DetectorConfig detector;
    ThresholdConfig threshold;
};

class RecordWriter {
public:
    RecordWriter(std::ostream& out, const DetectOptions& opt)
        : out_(out), csv_(opt.output_format == "csv"), inflections_(opt.include_inflections)
    {
        if (csv_)
            write_stay_csv_header(out_);
    }

    void write(const std::vector<StayPoint>& records)
    {
        for (const auto& sp : records) {
            if (sp.cls == StayClass::Inflection && !inflections_)
                continue;
            if (csv_)
                write_stay_csv_row(out_, sp);
            else
                out_ << to_json_line(sp) << '\n';
        }
        out_.flush();
    }

private:
    std::ostream& out_;
    bool csv_;
    bool inflections_;
};

void run_streaming(const DetectOptions& opt, std::istream& in, std::ostream& out)
{
    std::ifstream file;
    std::istream* src = &in;
    if (!opt.input.empty() && opt.input != "-") {
        file.open(opt.input, std::ios::binary);
        if (!file)
            throw UsageError("cannot open '" + opt.input + "'");
        src = &file;
    }
    const std::string source = src == &in ? "<stdin>" : opt.input;

    StreamingDetector detector(opt.detector);
    RecordWriter writer(out, opt);
    std::string line;
    std::size_t number = 0;
    bool header = false;
    while (std::getline(*src, line)) {
        ++number;
        const auto text = detail::trim_line_end(line);
        if (!header) {
            if (text != "timestamp,lat,lon")
                throw UsageError(source + ":1: expected header 'timestamp,lat,lon'");
            header = true;
            continue;
        }
        if (text.find_first_not_of(" \t") == std::string_view::npos)
            continue;
        LocationSample sample;
        try {
            sample = parse_trajectory_row(text, number);
        } catch (const InputError& e) {
            writer.write(detector.flush());
            throw UsageError(where(source, e));
        }
        try {
            writer.write(detector.push(sample));
        } catch (const std::invalid_argument& e) {
            writer.write(detector.flush());
            throw UsageError(source + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    if (!header)
        throw UsageError(source + ": empty input");
    writer.write(detector.flush());
}

void run_detect(const DetectOptions& opt, std::istream& in, std::ostream& out, std::ostream& err)
{
    opt.detector.validate();
    opt.threshold.validate();
    if (opt.streaming) {
        run_streaming(opt, in, out);
        return;
    }
    const auto samples = load_samples(opt.input, opt.format, in, err);
    RecordWriter writer(out, opt);
    for (const auto& day : split_by_day(samples)) {
        if (opt.method == "threshold")
            writer.write(threshold_detect(day, opt.threshold));
        else
            writer.write(detect(day, opt.detector));
    }
}

void run_curve(const std::string& input, const std::string& format, const std::string& output,
               const DetectorConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err)
{
    cfg.validate();
    const auto samples = load_samples(input, format, in, err);
    std::ofstream file;
    std::ostream* dst = &out;
    if (!output.empty() && output != "-") {
        file = open_output(output);
        dst = &file;
    }
    using detail::format_double;
    *dst << "day,x_min,y_km,d1,d2,confidence,class\n";
    for (const auto& day : split_by_day(samples)) {
        const auto trace = detect_with_trace(day, cfg);
        const auto& pts = trace.curve.points;
        const auto day_text = format_date(day.day);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::string cls = "none";
            for (const auto& r : trace.records)
                if (r.first_index <= i && i <= r.last_index) {
                    cls = std::string(to_string(r.cls));
                    break;
                }
            const bool have = i < trace.derivatives.d1.size();
            *dst << day_text << ',' << format_double(pts[i].x) << ',' << format_double(pts[i].y) << ','
                 << format_double(have ? trace.derivatives.d1[i] : 0.0) << ','
                 << format_double(have ? trace.derivatives.d2[i] : 0.0) << ','
                 << format_double(i < trace.confidence.size() ? trace.confidence[i] : 0.0) << ',' << cls << '\n';
        }
    }
}

struct SynthOptions {
    std::string scenario;
    std::string policy = "sls100";
    double sigma_m = 0.0;
    double outlier_rate = 0.0;
    double outlier_max_m = 1000.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string truth;
};

void run_synth(const SynthOptions& opt, std::ostream& out)
{
    const auto text = read_file(opt.scenario);
    Scenario scenario;
    try {
        scenario = parse_scenario_json(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(opt.scenario + ": " + e.what());
    }
    auto policy = SamplingPolicy::from_name(opt.policy);
    policy.noise_sigma_m = opt.sigma_m;
    policy.outlier_rate = opt.outlier_rate;
    policy.outlier_max_m = opt.outlier_max_m;
    const auto day = generate(scenario, policy, opt.seed);

    if (opt.out.empty() || opt.out == "-") {
        write_trajectory_csv(out, day.trajectory.samples);
    } else {
        auto f = open_output(opt.out);
        write_trajectory_csv(f, day.trajectory.samples);
    }
    if (!opt.truth.empty()) {
        auto f = open_output(opt.truth);
        write_ground_truth(f, day.truth);
    }
}

struct EvalOptions {
    std::string detected;
    std::string truth;
    MatchConfig match;
};

void run_eval(const EvalOptions& opt, std::ostream& out)
{
    opt.match.validate();
    std::vector<StayPoint> detected;
    std::vector<GroundTruthStay> truth;
    {
        std::istringstream in(read_file(opt.detected));
        try {
            detected = read_stay_jsonl(in);
        } catch (const InputError& e) {
            throw UsageError(where(opt.detected, e));
        }
    }
    try {
        truth = parse_ground_truth(std::string_view(read_file(opt.truth)));
    } catch (const InputError& e) {
        throw UsageError(where(opt.truth, e));
    }
    const auto r = evaluate(detected, truth, opt.match);
    out << report_json(r) << '\n' << report_table(r);
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Stay-point detection on daily GPS trajectories", "staypoint"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "staypoint 0.1.0");

    DetectOptions det;
    auto* detect_cmd = app.add_subcommand("detect", "Detect stay points");
    detect_cmd->add_option("--input", det.input, "Trajectory file (stdin when omitted)");
    detect_cmd->add_option("--format", det.format, "Input format")->check(CLI::IsMember({"csv", "gpx"}))->capture_default_str();
    detect_cmd->add_option("--method", det.method, "Detector")->check(CLI::IsMember({"extrema", "threshold"}))->capture_default_str();
    detect_cmd->add_flag("--streaming", det.streaming, "Process CSV rows as they arrive");
    detect_cmd->add_option("--e", det.detector.e, "Speed (km/min) that earns full confidence")->capture_default_str();
    detect_cmd->add_option("--stay-threshold", det.detector.stay_threshold, "Percent")->capture_default_str();
    detect_cmd->add_option("--candidate-threshold", det.detector.candidate_threshold, "Percent")->capture_default_str();
    detect_cmd->add_option("--d1-min-floor", det.detector.d1_min_floor, "km/min")->capture_default_str();
    detect_cmd->add_option("--travel-speed-kmh", det.detector.travel_speed_kmh, "Used for duration estimates")->capture_default_str();
    detect_cmd->add_flag("--constant-d1-min", det.constant_d1_min, "Use --d1-min-floor instead of the day's minimum speed");
    detect_cmd->add_option("--distance-m", det.threshold.distance_m, "Threshold method distance")->capture_default_str();
    detect_cmd->add_option("--time-min", det.threshold.time_min, "Threshold method duration")->capture_default_str();
    detect_cmd->add_option("--output-format", det.output_format, "Record format")->check(CLI::IsMember({"jsonl", "csv"}))->capture_default_str();
    detect_cmd->add_flag("--include-inflections", det.include_inflections, "Also emit Inflection records");

    std::string curve_input;
    std::string curve_format = "csv";
    std::string curve_out;
    DetectorConfig curve_cfg;
    auto* curve_cmd = app.add_subcommand("curve", "Dump the distance-time curve with derivatives");
    curve_cmd->add_option("--input", curve_input, "Trajectory file (stdin when omitted)");
    curve_cmd->add_option("--format", curve_format, "Input format")->check(CLI::IsMember({"csv", "gpx"}))->capture_default_str();
    curve_cmd->add_option("--out", curve_out, "Output CSV (stdout when omitted)");
    curve_cmd->add_option("--e", curve_cfg.e)->capture_default_str();
    curve_cmd->add_option("--stay-threshold", curve_cfg.stay_threshold)->capture_default_str();
    curve_cmd->add_option("--candidate-threshold", curve_cfg.candidate_threshold)->capture_default_str();

    SynthOptions syn;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a trajectory from a scenario");
    synth_cmd->add_option("--scenario", syn.scenario, "Scenario JSON")->required();
    synth_cmd->add_option("--policy", syn.policy, "Sampling policy")
        ->check(CLI::IsMember({"sls100", "sls250", "sls500", "hybrid"}))
        ->capture_default_str();
    synth_cmd->add_option("--sigma", syn.sigma_m, "Gaussian noise, metres")->check(CLI::NonNegativeNumber)->capture_default_str();
    synth_cmd->add_option("--seed", syn.seed)->capture_default_str();
    synth_cmd->add_option("--outlier-rate", syn.outlier_rate)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    synth_cmd->add_option("--outlier-max-m", syn.outlier_max_m)->check(CLI::NonNegativeNumber)->capture_default_str();
    synth_cmd->add_option("--out", syn.out, "Trajectory CSV (stdout when omitted)");
    synth_cmd->add_option("--truth", syn.truth, "Ground-truth CSV");

    EvalOptions ev;
    auto* eval_cmd = app.add_subcommand("eval", "Score detected stays against ground truth");
    eval_cmd->add_option("--detected", ev.detected, "Detected records (JSON lines)")->required();
    eval_cmd->add_option("--truth", ev.truth, "Ground-truth CSV")->required();
    eval_cmd->add_option("--radius-m", ev.match.radius_m)->capture_default_str();
    eval_cmd->add_option("--min-overlap-min", ev.match.min_overlap_min)->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (detect_cmd->parsed()) {
            if (det.streaming && det.method == "threshold")
                throw UsageError("--streaming only works with --method extrema");
            if (det.streaming && det.format != "csv")
                throw UsageError("--streaming reads CSV only");
            if (det.constant_d1_min)
                det.detector.min_speed_mode = MinSpeedMode::Constant;
            run_detect(det, in, out, err);
        } else if (curve_cmd->parsed()) {
            run_curve(curve_input, curve_format, curve_out, curve_cfg, in, out, err);
        } else if (synth_cmd->parsed()) {
            run_synth(syn, out);
        } else if (eval_cmd->parsed()) {
            run_eval(ev, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const InputError& e) {
        err << "error: " << where("input", e) << '\n';
        return kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace staypoint::cli
