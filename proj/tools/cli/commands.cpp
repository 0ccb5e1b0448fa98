#include "cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "lfc/aperture.hpp"
#include "lfc/container.hpp"
#include "lfc/error.hpp"
#include "lfc/export.hpp"
#include "lfc/light_field_io.hpp"
#include "lfc/metrics.hpp"
#include "lfc/pfm.hpp"
#include "lfc/pipeline.hpp"
#include "lfc/sweep.hpp"
#include "lfc/synthetic.hpp"

#ifndef LFC_VERSION
#define LFC_VERSION "0.0.0"
#endif

namespace lfc::cli {

namespace {

constexpr std::string_view kModule = "cli";

// Everything a subcommand may consume. Unused fields are ignored.
struct JobConfig {
  std::string command;
  std::string config;
  std::string manifest;

  // input light field
  std::string views;
  size_t rows = 5;
  size_t cols = 5;
  size_t firstRow = 0;
  size_t firstCol = 0;
  size_t step = 1;

  // patterns
  std::string patternKind = "uniform-random";
  size_t count = 2;
  uint64_t seed = 1;
  std::vector<std::string> patternFiles;

  // coding
  int dLevel = 1;
  std::vector<int> levels = {1, 2, 3, 4, 5};
  int bitDepth = 10;
  double baseStep = kDefaultBaseStep;
  double ridge = kDefaultRidge;
  std::string basis = "none";
  double ptfA = PtfParams::defaults().a();
  double ptfC = PtfParams::defaults().c();
  double ptfLow = PtfParams::defaults().lowBreak();
  double ptfMid = PtfParams::defaults().midBreak();
  double ptfHigh = PtfParams::defaults().highBreak();
  std::string primaries = "rec709";
  bool fullPlaneLambda = false;

  // outputs
  std::string output;
  std::string input;
  std::string outAcquired;
  std::string outViews;
  std::string outDir;
  std::string inDir;
  std::string csv;
  std::string reference;
  std::string test;
  std::optional<double> peak;
  bool chroma420 = false;

  // synth
  std::string kind = "parallax";
  size_t width = 64;
  size_t height = 64;
  size_t channels = 3;
  size_t rank = 2;
};

void addViewOptions(CLI::App* sub, JobConfig& cfg, bool required) {
  auto* v = sub->add_option("--views", cfg.views, "view path template with {s} and {t}");
  if (required) v->required();
  sub->add_option("--rows", cfg.rows, "aperture rows S");
  sub->add_option("--cols", cfg.cols, "aperture columns T");
  sub->add_option("--first-row", cfg.firstRow, "first on-disk row to load");
  sub->add_option("--first-col", cfg.firstCol, "first on-disk column to load");
  sub->add_option("--step", cfg.step, "on-disk view stride");
}

void addPatternOptions(CLI::App* sub, JobConfig& cfg) {
  sub->add_option("--patterns", cfg.patternKind, "uniform-random | one-hot-set | pinhole-pair");
  sub->add_option("-N,--count", cfg.count, "number of acquired images");
  sub->add_option("--seed", cfg.seed, "pattern seed");
  sub->add_option("--pattern-file", cfg.patternFiles, "explicit pattern grid (repeatable)");
}

void addPerceptualOptions(CLI::App* sub, JobConfig& cfg) {
  sub->add_option("-n,--bit-depth", cfg.bitDepth, "8, 10 or 12");
  sub->add_option("--ptf-a", cfg.ptfA, "linear-segment gain");
  sub->add_option("--ptf-c", cfg.ptfC, "power-segment exponent");
  sub->add_option("--ptf-low-break", cfg.ptfLow, "linear/power breakpoint");
  sub->add_option("--ptf-mid-break", cfg.ptfMid, "power/log breakpoint");
  sub->add_option("--ptf-high-break", cfg.ptfHigh, "peak intensity");
  sub->add_option("--primaries", cfg.primaries, "rec709 | rec2020");
  sub->add_flag("--full-plane-lambda", cfg.fullPlaneLambda, "fit lambda on every pixel");
}

void addCodingOptions(CLI::App* sub, JobConfig& cfg) {
  addPatternOptions(sub, cfg);
  addPerceptualOptions(sub, cfg);
  sub->add_option("-d,--distortion", cfg.dLevel, "distortion level 1..5");
  sub->add_option("--base-step", cfg.baseStep, "quantizer step at d=1 (unit plane range)");
  sub->add_option("--ridge", cfg.ridge, "reconstruction ridge (0 = pseudo-inverse)");
  sub->add_option("--basis", cfg.basis, "none | pca");
}

std::unique_ptr<CLI::App> buildApp(JobConfig& cfg) {
  auto app = std::make_unique<CLI::App>("HDR light-field codec (4D-DCT, coded aperture)", "lfc4");
  app->set_version_flag("--version", LFC_VERSION);
  app->require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", cfg.config, "flat key=value file; flags win");
    sub->add_option("--manifest", cfg.manifest, "manifest path override");
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  };

  auto* synth = app->add_subcommand("synth", "write a synthetic light field as PFM views");
  synth->add_option("--out", cfg.outViews, "view path template with {s} and {t}")->required();
  synth->add_option("--kind", cfg.kind, "parallax | mixture | constant");
  synth->add_option("--rows", cfg.rows, "aperture rows S");
  synth->add_option("--cols", cfg.cols, "aperture columns T");
  synth->add_option("--width", cfg.width);
  synth->add_option("--height", cfg.height);
  synth->add_option("--channels", cfg.channels, "1 or 3");
  synth->add_option("--rank", cfg.rank, "mixture rank");
  synth->add_option("--seed", cfg.seed);
  common(synth);

  auto* acq = app->add_subcommand("acquire", "simulate coded-aperture exposures");
  addViewOptions(acq, cfg, true);
  addPatternOptions(acq, cfg);
  acq->add_option("--out-dir", cfg.outDir, "directory for acquired_<n>.pfm and pattern_<n>.txt")->required();
  common(acq);

  auto* enc = app->add_subcommand("encode", "light field -> .lfc4");
  addViewOptions(enc, cfg, true);
  addCodingOptions(enc, cfg);
  enc->add_option("-o,--output", cfg.output, ".lfc4 path")->required();
  common(enc);

  auto* dec = app->add_subcommand("decode", ".lfc4 -> acquired images + reconstructed views");
  dec->add_option("-i,--input", cfg.input, ".lfc4 path")->required();
  dec->add_option("--out-acquired", cfg.outAcquired, "PFM template with {n}");
  dec->add_option("--out-views", cfg.outViews, "PFM template with {s} and {t}");
  common(dec);

  auto* ev = app->add_subcommand("eval", "rate-distortion sweep and Bjontegaard report");
  addViewOptions(ev, cfg, false);
  addCodingOptions(ev, cfg);
  ev->add_option("--levels", cfg.levels, "distortion levels to sweep");
  ev->add_option("--peak", cfg.peak, "PSNR peak (default: ground-truth max)");
  ev->add_option("--csv", cfg.csv, "sweep CSV output");
  ev->add_option("--reference", cfg.reference, "reference sweep CSV");
  ev->add_option("--test", cfg.test, "test sweep CSV (default: the fresh sweep)");
  common(ev);

  auto* ex = app->add_subcommand("export-acquired", "planar n-bit frames for an external encoder");
  addViewOptions(ex, cfg, true);
  addPatternOptions(ex, cfg);
  addPerceptualOptions(ex, cfg);
  ex->add_option("--out-dir", cfg.outDir, "directory for frame_<n>.yuv and sidecars")->required();
  ex->add_flag("--chroma-420", cfg.chroma420, "2x2 average-pooled chroma");
  common(ex);

  auto* im = app->add_subcommand("import-acquired", "exported frames -> reconstructed views");
  im->add_option("--in-dir", cfg.inDir, "directory written by export-acquired")->required();
  im->add_option("--ridge", cfg.ridge);
  im->add_option("--out-acquired", cfg.outAcquired, "PFM template with {n}");
  im->add_option("--out-views", cfg.outViews, "PFM template with {s} and {t}");
  common(im);

  return app;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Turns the config file into "--key=value" arguments for every option the
// command line left unset.
std::vector<std::string> configArgs(CLI::App& sub, const std::string& path) {
  const auto bytes = readFileBytes(path);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  std::vector<std::string> out;
  std::string line;
  size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::kFormat, kModule,
           path + ":" + std::to_string(lineNo) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      fail(ErrorKind::kInvalidArgument, kModule,
           path + ":" + std::to_string(lineNo) + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") out.push_back("--" + key);
    } else {
      out.push_back("--" + key + "=" + value);
    }
  }
  return out;
}

void parseArgs(std::unique_ptr<CLI::App>& app, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  app->parse(args);
}

void validate(const JobConfig& c) {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) fail(ErrorKind::kInvalidArgument, kModule, msg);
  };
  check(c.rows > 0 && c.cols > 0, "--rows and --cols must be > 0");
  check(c.step > 0, "--step must be > 0");
  check(c.count > 0, "--count must be > 0");
  check(c.dLevel >= 1 && c.dLevel <= 5, "--distortion must be in 1..5");
  for (int d : c.levels) check(d >= 1 && d <= 5, "--levels must be in 1..5");
  check(c.baseStep > 0.0, "--base-step must be > 0");
  check(c.ridge >= 0.0, "--ridge must be >= 0");
  check(!c.peak || *c.peak > 0.0, "--peak must be > 0");
  validateBitDepth(c.bitDepth);
  parsePatternKind(c.patternKind);
  parsePrimaries(c.primaries);
  parseBasisMode(c.basis);
  PtfParams::fromAnchors(c.ptfA, c.ptfC, c.ptfLow, c.ptfMid, c.ptfHigh);
}

LightField4D loadViews(const JobConfig& c) {
  return loadLightField(c.views, c.rows, c.cols, {c.firstRow, c.firstCol, c.step});
}

PatternSpec patternSpec(const JobConfig& c) {
  PatternSpec spec;
  spec.kind = parsePatternKind(c.patternKind);
  spec.count = c.count;
  spec.seed = c.seed;
  for (const auto& f : c.patternFiles) spec.explicitPatterns.push_back(loadPatternFile(f));
  return spec;
}

PerceptualOptions perceptualOptions(const JobConfig& c) {
  PerceptualOptions p;
  p.ptf = PtfParams::fromAnchors(c.ptfA, c.ptfC, c.ptfLow, c.ptfMid, c.ptfHigh);
  p.bitDepth = c.bitDepth;
  p.primaries = parsePrimaries(c.primaries);
  p.fullPlaneLambda = c.fullPlaneLambda;
  return p;
}

EncodeOptions encodeOptions(const JobConfig& c) {
  EncodeOptions o;
  o.patterns = patternSpec(c);
  o.dLevel = c.dLevel;
  o.baseStep = c.baseStep;
  o.ridge = c.ridge;
  o.basis = parseBasisMode(c.basis);
  o.perceptual = perceptualOptions(c);
  return o;
}

std::string replaceAll(std::string s, const std::string& from, const std::string& to) {
  for (size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

void writeText(const std::filesystem::path& path, const std::string& text) {
  writeFileBytes(path, std::span(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

std::filesystem::path parentOf(const std::string& path) {
  const auto p = std::filesystem::path(path).parent_path();
  return p.empty() ? std::filesystem::path(".") : p;
}

// Stable key order, no timestamps: reruns with the same inputs give the same
// bytes.
nlohmann::json manifestJson(const JobConfig& c) {
  nlohmann::json j;
  j["tool"] = "lfc4";
  j["version"] = LFC_VERSION;
  j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
               "." + std::to_string(EIGEN_MINOR_VERSION);
  j["container_version"] = kContainerVersion;
  j["command"] = c.command;
  auto& cfg = j["config"];
  cfg["views"] = c.views;
  cfg["rows"] = c.rows;
  cfg["cols"] = c.cols;
  cfg["first_row"] = c.firstRow;
  cfg["first_col"] = c.firstCol;
  cfg["step"] = c.step;
  cfg["patterns"] = c.patternKind;
  cfg["count"] = c.count;
  cfg["seed"] = c.seed;
  cfg["pattern_files"] = c.patternFiles;
  cfg["distortion"] = c.dLevel;
  cfg["levels"] = c.levels;
  cfg["bit_depth"] = c.bitDepth;
  cfg["base_step"] = c.baseStep;
  cfg["ridge"] = c.ridge;
  cfg["basis"] = c.basis;
  cfg["ptf"] = {{"a", c.ptfA},
                {"c", c.ptfC},
                {"low_break", c.ptfLow},
                {"mid_break", c.ptfMid},
                {"high_break", c.ptfHigh}};
  cfg["primaries"] = c.primaries;
  cfg["full_plane_lambda"] = c.fullPlaneLambda;
  cfg["chroma_420"] = c.chroma420;
  cfg["input"] = c.input;
  cfg["in_dir"] = c.inDir;
  cfg["output"] = c.output;
  cfg["out_dir"] = c.outDir;
  cfg["out_acquired"] = c.outAcquired;
  cfg["out_views"] = c.outViews;
  cfg["csv"] = c.csv;
  cfg["reference"] = c.reference;
  cfg["test"] = c.test;
  if (c.peak) cfg["peak"] = *c.peak;
  if (c.command == "synth") {
    cfg["kind"] = c.kind;
    cfg["width"] = c.width;
    cfg["height"] = c.height;
    cfg["channels"] = c.channels;
    cfg["rank"] = c.rank;
  }
  return j;
}

void writeManifest(const JobConfig& c, const std::filesystem::path& fallback,
                   nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json j = manifestJson(c);
  if (!extra.empty()) j["result"] = std::move(extra);
  const std::filesystem::path path = c.manifest.empty() ? fallback : std::filesystem::path(c.manifest);
  writeText(path, j.dump(2) + "\n");
}

void saveAcquired(const AcquisitionSet& acq, const std::string& pathTemplate) {
  for (size_t n = 0; n < acq.count(); ++n) {
    const std::filesystem::path path = replaceAll(pathTemplate, "{n}", std::to_string(n));
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    savePfm(acq.images[n], path);
  }
}

// ---------------------------------------------------------------------------

int cmdSynth(const JobConfig& c, std::ostream& out) {
  LightField4D lf = [&] {
    if (c.kind == "parallax") {
      return makeParallaxLightField(c.rows, c.cols, c.width, c.height, c.channels, c.seed);
    }
    if (c.kind == "mixture") {
      return makeMixtureLightField(c.rows, c.cols, c.width, c.height, c.channels, c.rank, c.seed)
          .lightField;
    }
    if (c.kind == "constant") {
      return makeConstantLightField(c.rows, c.cols, c.width, c.height, c.channels, 0.5);
    }
    fail(ErrorKind::kInvalidArgument, kModule, "unknown synthetic kind '" + c.kind + "'");
  }();
  saveLightField(lf, c.outViews);
  writeManifest(c, parentOf(c.outViews) / "synth.manifest.json");
  out << "wrote " << lf.viewCount() << " views " << lf.width() << "x" << lf.height() << "x"
      << lf.channels() << "\n";
  return kExitOk;
}

int cmdAcquire(const JobConfig& c, std::ostream& out) {
  const LightField4D lf = loadViews(c);
  const auto patterns = patternSpec(c).resolve(lf.angularRows(), lf.angularCols());
  const AcquisitionSet acq = acquire(lf, patterns);
  const std::filesystem::path dir = c.outDir;
  std::filesystem::create_directories(dir);
  for (size_t n = 0; n < acq.count(); ++n) {
    savePfm(acq.images[n], dir / ("acquired_" + std::to_string(n) + ".pfm"));
    savePatternFile(acq.patterns[n], dir / ("pattern_" + std::to_string(n) + ".txt"));
  }
  writeManifest(c, dir / "acquire.manifest.json");
  out << "acquired " << acq.count() << " images from " << lf.viewCount() << " views\n";
  return kExitOk;
}

int cmdEncode(const JobConfig& c, std::ostream& out) {
  const LightField4D lf = loadViews(c);
  const EncodeResult r = encodeLightField(lf, encodeOptions(c));
  const double pixels = static_cast<double>(lf.viewCount() * lf.width() * lf.height());
  const double bpp = static_cast<double>(r.bytes.size()) * 8.0 / pixels;

  writeFileBytes(c.output, r.bytes);
  std::ostringstream meta;
  meta.precision(17);
  meta << "width=" << lf.width() << "\nheight=" << lf.height() << "\nrows=" << lf.angularRows()
       << "\ncols=" << lf.angularCols() << "\nframes=" << r.frames.size() << "\nd=" << c.dLevel
       << "\nqstep=" << r.quantStep << "\nbytes=" << r.bytes.size() << "\nbpp=" << bpp << "\n";
  for (size_t i = 0; i < r.frames.size(); ++i) meta << formatMetadata(r.frames[i].meta, i);
  writeText(c.output + ".meta.txt", meta.str());
  writeManifest(c, c.output + ".manifest.json",
                {{"bytes", r.bytes.size()}, {"bpp", bpp}, {"qstep", r.quantStep}});

  char line[160];
  std::snprintf(line, sizeof line, "%zu views -> %zu frames, d=%d, qstep=%.6g: %zu bytes, %.6f bpp\n",
                lf.viewCount(), r.frames.size(), c.dLevel, r.quantStep, r.bytes.size(), bpp);
  out << line;
  return kExitOk;
}

int cmdDecode(const JobConfig& c, std::ostream& out) {
  // Decode everything before touching the output paths so a corrupt file
  // leaves nothing behind.
  const auto bytes = readFileBytes(c.input);
  const DecodeResult r = decodeLightField(bytes);
  if (!c.outAcquired.empty()) saveAcquired(r.acquisition, c.outAcquired);
  if (!c.outViews.empty()) saveLightField(r.lightField, c.outViews);
  const std::string anchor = !c.outViews.empty() ? c.outViews : c.outAcquired;
  const std::filesystem::path fallback =
      anchor.empty() ? std::filesystem::path(c.input + ".decode.manifest.json")
                     : parentOf(anchor) / "decode.manifest.json";
  writeManifest(c, fallback,
                {{"width", r.header.width},
                 {"height", r.header.height},
                 {"frames", r.header.frames},
                 {"rows", r.header.rows},
                 {"cols", r.header.cols},
                 {"clamped_samples", r.clampedSamples}});
  out << "decoded " << r.header.frames << " frames " << r.header.width << "x" << r.header.height
      << " -> " << r.lightField.viewCount() << " views";
  if (r.clampedSamples > 0) out << " (" << r.clampedSamples << " PTF codes clamped)";
  out << "\n";
  return kExitOk;
}

std::vector<SweepRow> readCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, kModule, "cannot open " + path);
  return readSweepCsv(in);
}

int cmdEval(const JobConfig& c, std::ostream& out) {
  if (c.views.empty() && (c.reference.empty() || c.test.empty())) {
    fail(ErrorKind::kInvalidArgument, kModule,
         "eval needs ground truth (--views) or two sweeps (--reference and --test)");
  }
  nlohmann::json result = nlohmann::json::object();
  std::vector<SweepRow> fresh;
  if (!c.views.empty()) {
    const LightField4D lf = loadViews(c);
    SweepOptions opts;
    opts.encode = encodeOptions(c);
    opts.dLevels = c.levels;
    opts.peak = c.peak;
    const SweepResult sweep = rdSweep(lf, opts);
    fresh = sweep.rows;
    if (!c.csv.empty()) {
      std::ostringstream csv;
      writeSweepCsv(csv, fresh);
      writeText(c.csv, csv.str());
    } else {
      writeSweepCsv(out, fresh);
    }
    result["peak"] = sweep.peak;
    result["rows"] = fresh.size();
  }
  if (!c.reference.empty()) {
    const auto ref = readCsv(c.reference);
    const auto test = c.test.empty() ? fresh : readCsv(c.test);
    const auto refPts = toRdPoints(ref);
    const auto testPts = toRdPoints(test);
    const BDResult bd = bdMetrics(refPts, testPts);
    char line[128];
    std::snprintf(line, sizeof line, "BD-Rate: %.6f %%\nBD-PSNR: %.6f dB\n", bd.bdRate,
                  bd.bdPsnr);
    out << line;
    result["bd_rate_percent"] = bd.bdRate;
    result["bd_psnr_db"] = bd.bdPsnr;
  }
  std::filesystem::path fallback = "eval.manifest.json";
  if (!c.csv.empty()) {
    fallback = c.csv + ".manifest.json";
  } else if (!c.reference.empty()) {
    fallback = parentOf(c.reference) / "eval.manifest.json";
  }
  writeManifest(c, fallback, result);
  return kExitOk;
}

int cmdExport(const JobConfig& c, std::ostream& out) {
  const LightField4D lf = loadViews(c);
  const auto patterns = patternSpec(c).resolve(lf.angularRows(), lf.angularCols());
  const AcquisitionSet acq = acquire(lf, patterns);
  const auto frames = exportAcquisition(acq, perceptualOptions(c), c.chroma420, c.outDir);

  std::vector<ExportedFrame> back;
  importAcquisition(c.outDir, &back);
  if (back != frames) {
    fail(ErrorKind::kFormat, kModule, "re-import of " + c.outDir + " does not match the export");
  }
  writeManifest(c, std::filesystem::path(c.outDir) / "export.manifest.json");
  out << "exported " << frames.size() << " frames at " << c.bitDepth << " bits"
      << (c.chroma420 ? " (4:2:0)" : "") << ", re-import verified\n";
  return kExitOk;
}

int cmdImport(const JobConfig& c, std::ostream& out) {
  const AcquisitionSet acq = importAcquisition(c.inDir);
  const LightField4D lf = reconstructLinear(acq, c.ridge);
  if (!c.outAcquired.empty()) saveAcquired(acq, c.outAcquired);
  if (!c.outViews.empty()) saveLightField(lf, c.outViews);
  writeManifest(c, std::filesystem::path(c.inDir) / "import.manifest.json");
  out << "imported " << acq.count() << " frames -> " << lf.viewCount() << " views\n";
  return kExitOk;
}

int dispatch(const JobConfig& c, std::ostream& out) {
  if (c.command == "synth") return cmdSynth(c, out);
  if (c.command == "acquire") return cmdAcquire(c, out);
  if (c.command == "encode") return cmdEncode(c, out);
  if (c.command == "decode") return cmdDecode(c, out);
  if (c.command == "eval") return cmdEval(c, out);
  if (c.command == "export-acquired") return cmdExport(c, out);
  if (c.command == "import-acquired") return cmdImport(c, out);
  return kExitInternal;
}

// A config file may supply required options, so the first pass cannot insist on them.
bool mentionsConfig(const std::vector<std::string>& args) {
  return std::any_of(args.begin(), args.end(),
                     [](const std::string& a) { return a == "--config" || a.rfind("--config=", 0) == 0; });
}

void relaxRequired(CLI::App& app) {
  for (CLI::App* sub : app.get_subcommands({})) {
    for (CLI::Option* opt : sub->get_options()) opt->required(false);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  JobConfig cfg;
  auto app = buildApp(cfg);
  try {
    const bool withConfig = mentionsConfig(args);
    if (withConfig) relaxRequired(*app);
    parseArgs(app, args);
    if (withConfig && !cfg.config.empty()) {
      CLI::App* sub = app->get_subcommand(cfg.command);
      auto merged = args;
      const auto extra = configArgs(*sub, cfg.config);
      merged.insert(merged.end(), extra.begin(), extra.end());
      cfg = JobConfig{};
      app = buildApp(cfg);
      parseArgs(app, merged);
    }
    validate(cfg);
    return dispatch(cfg, out);
  } catch (const CLI::ParseError& e) {
    app->exit(e, out, err);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    err << "lfc4: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "lfc4: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace lfc::cli
