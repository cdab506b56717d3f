#include "dgd/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dgd/baselines.hpp"
#include "dgd/errors.hpp"

namespace dgd {

using nlohmann::json;

namespace {

constexpr std::string_view kMagic = "DGT1";
constexpr std::size_t kMaxHeader = 4096;

DgtKind kind_from_string(std::string_view s, std::uint64_t offset) {
  for (DgtKind k : {DgtKind::adjacency, DgtKind::mask, DgtKind::signals, DgtKind::latents, DgtKind::signatures}) {
    if (to_string(k) == s) return k;
  }
  throw DgtError("unknown kind '" + std::string(s) + "'", offset);
}

void check_dims(const DgtObject& obj, std::uint64_t offset) {
  const auto& d = obj.dims;
  switch (obj.kind) {
    case DgtKind::adjacency:
    case DgtKind::mask:
    case DgtKind::latents:
      if (d.size() != 3 || d[0] != d[1]) {
        throw DgtError(std::string(to_string(obj.kind)) + " requires dims [N, N, K]", offset);
      }
      break;
    case DgtKind::signals:
      if (d.size() != 3) throw DgtError("signals requires dims [N, Q, T]", offset);
      break;
    case DgtKind::signatures:
      if (d.size() != 2) throw DgtError("signatures requires dims [T, R]", offset);
      break;
  }
}

std::uint64_t element_count(const std::vector<std::uint64_t>& dims) {
  std::uint64_t n = 1;
  for (auto v : dims) {
    if (v != 0 && n > std::numeric_limits<std::uint64_t>::max() / 8 / v) return std::numeric_limits<std::uint64_t>::max();
    n *= v;
  }
  return n;
}

void put_le(std::ostream& os, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  os.write(b, 8);
}

double get_le(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

// Order-3 payload: slice k outermost, then rows, then columns.
DgtObject pack_slices(DgtKind kind, const std::vector<Matrix>& slices, std::uint64_t rows, std::uint64_t cols) {
  DgtObject obj{kind, {rows, cols, slices.size()}, {}};
  obj.data.reserve(rows * cols * slices.size());
  for (const auto& s : slices) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.cols(); ++j) obj.data.push_back(s(i, j));
    }
  }
  return obj;
}

std::vector<Matrix> unpack_slices(const DgtObject& obj) {
  const auto rows = static_cast<Eigen::Index>(obj.dims[0]);
  const auto cols = static_cast<Eigen::Index>(obj.dims[1]);
  std::vector<Matrix> out(obj.dims[2], Matrix(rows, cols));
  std::size_t pos = 0;
  for (auto& s : out) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) s(i, j) = obj.data[pos++];
    }
  }
  return out;
}

void expect_kind(const DgtObject& obj, DgtKind kind) {
  if (obj.kind != kind) {
    throw DgtError("expected kind '" + std::string(to_string(kind)) + "', found '" +
                       std::string(to_string(obj.kind)) + "'",
                   0);
  }
}

json parse_object(std::string_view text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError(what, "expected a JSON object");
  return j;
}

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!j.is_number()) throw ConfigError(key, "expected a number");
      return j.get<double>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!j.is_boolean()) throw ConfigError(key, "expected a boolean");
      return j.get<bool>();
    } else if constexpr (std::is_same_v<T, std::uint64_t> || std::is_same_v<T, std::size_t>) {
      if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
        throw ConfigError(key, "expected a nonnegative integer");
      }
      return static_cast<T>(j.get<std::uint64_t>());
    } else {
      return j.get<T>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

void apply_hyperparams(const json& j, Hyperparams& h) {
  for (const auto& [key, v] : j.items()) {
    if (key == "rank") h.rank = get_as<std::size_t>(v, key);
    else if (key == "gamma") h.gamma = get_as<double>(v, key);
    else if (key == "delta") h.delta = get_as<double>(v, key);
    else if (key == "beta") h.beta = get_as<double>(v, key);
    else if (key == "mu") h.mu = get_as<double>(v, key);
    else if (key == "rho") h.rho = get_as<double>(v, key);
    else if (key == "zeta") h.zeta = get_as<double>(v, key);
    else if (key == "eta") h.eta = get_as<double>(v, key);
    else if (key == "lambda_a") h.lambda_a = get_as<double>(v, key);
    else if (key == "lambda_c") h.lambda_c = get_as<double>(v, key);
    else if (key == "step_a") h.step_a = get_as<double>(v, key);
    else if (key == "step_c") h.step_c = get_as<double>(v, key);
    else if (key == "literal_steps") h.literal_steps = get_as<bool>(v, key);
    else if (key == "inner_iters") h.inner_iters = get_as<std::size_t>(v, key);
    else if (key == "outer_iters") h.outer_iters = get_as<std::size_t>(v, key);
    else if (key == "tol_outer") h.tol_outer = get_as<double>(v, key);
    else if (key == "early_exit") h.early_exit = get_as<bool>(v, key);
    else if (key == "gradient_mode") {
      if (!v.is_string()) throw ConfigError(key, "expected a string");
      h.gradient_mode = gradient_mode_from_string(v.get<std::string>());
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }
  h.validate();
}

void apply_swdyn(const json& j, SwDynSpec& s, double* observed_frac) {
  for (const auto& [key, v] : j.items()) {
    if (key == "n_nodes") s.n_nodes = get_as<std::size_t>(v, key);
    else if (key == "n_steps") s.n_steps = get_as<std::size_t>(v, key);
    else if (key == "n_signals") s.n_signals = get_as<std::size_t>(v, key);
    else if (key == "communities_start") s.communities_start = get_as<std::size_t>(v, key);
    else if (key == "communities_end") s.communities_end = get_as<std::size_t>(v, key);
    else if (key == "p_in") s.p_in = get_as<double>(v, key);
    else if (key == "p_out") s.p_out = get_as<double>(v, key);
    else if (key == "alpha") s.alpha = get_as<double>(v, key);
    else if (key == "noise_sigma") s.noise_sigma = get_as<double>(v, key);
    else if (key == "clip_noise") s.clip_noise = get_as<bool>(v, key);
    else if (key == "seed") s.seed = get_as<std::uint64_t>(v, key);
    else if (key == "observed_frac" && observed_frac) *observed_frac = get_as<double>(v, key);
    else throw ConfigError(key, "unknown configuration key");
  }
  s.validate();
}

std::string number_or_null(const std::optional<double>& v) {
  return v ? json(*v).dump() : "null";
}

}  // namespace

std::string_view to_string(DgtKind kind) {
  switch (kind) {
    case DgtKind::adjacency: return "adjacency";
    case DgtKind::mask: return "mask";
    case DgtKind::signals: return "signals";
    case DgtKind::latents: return "latents";
    case DgtKind::signatures: return "signatures";
  }
  return "unknown";
}

void write_dgt(std::ostream& os, const DgtObject& obj) {
  check_dims(obj, 0);
  if (element_count(obj.dims) != obj.data.size()) throw DgtError("payload size does not match dims", 0);
  json header = {{"magic", kMagic}, {"kind", to_string(obj.kind)}, {"dims", obj.dims}, {"dtype", "f64le"}};
  os << header.dump() << '\n';
  for (double v : obj.data) put_le(os, v);
  if (!os) throw std::runtime_error("write_dgt: stream error");
}

DgtObject read_dgt(std::istream& is) {
  std::string line;
  line.reserve(256);
  char ch = 0;
  while (line.size() < kMaxHeader && is.get(ch) && ch != '\n') line.push_back(ch);
  if (line.size() < 2 || line.front() != '{') throw DgtError("bad magic: not a DGT file", 0);
  if (ch != '\n') throw DgtError("header is not terminated by a newline", line.size());
  const std::uint64_t header_len = line.size() + 1;

  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DgtError(std::string("malformed header: ") + e.what(), e.byte);
  }
  if (!header.is_object() || !header.contains("magic") || header["magic"] != kMagic) {
    throw DgtError("bad magic: expected DGT1", 0);
  }
  if (!header.contains("dtype") || header["dtype"] != "f64le") throw DgtError("unsupported dtype", 0);
  if (!header.contains("kind") || !header["kind"].is_string()) throw DgtError("missing kind", 0);
  if (!header.contains("dims") || !header["dims"].is_array()) throw DgtError("missing dims", 0);

  DgtObject obj;
  obj.kind = kind_from_string(header["kind"].get<std::string>(), 0);
  for (const auto& d : header["dims"]) {
    if (!d.is_number_unsigned()) throw DgtError("dims must be nonnegative integers", 0);
    obj.dims.push_back(d.get<std::uint64_t>());
  }
  check_dims(obj, 0);
  const std::uint64_t count = element_count(obj.dims);
  if (count == std::numeric_limits<std::uint64_t>::max()) throw DgtError("dims overflow", 0);

  std::vector<unsigned char> raw(count * 8);
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  const auto got = static_cast<std::uint64_t>(is.gcount());
  if (got != raw.size()) {
    throw DgtError("truncated payload: expected " + std::to_string(count) + " values, found " +
                       std::to_string(got / 8),
                   header_len + got);
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw DgtError("trailing bytes after payload", header_len + raw.size());
  }
  obj.data.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) obj.data[i] = get_le(raw.data() + 8 * i);
  return obj;
}

void save_dgt(const std::filesystem::path& path, const DgtObject& obj) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_dgt(os, obj);
}

DgtObject load_dgt(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_dgt(is);
}

DgtObject to_dgt(const DynTensor& x, DgtKind kind) {
  return pack_slices(kind, x.slices(), x.n_nodes(), x.n_nodes());
}

DgtObject to_dgt(const MaskTensor& m) { return to_dgt(m.values(), DgtKind::mask); }

DgtObject to_dgt(const SignalTensor& x) {
  return pack_slices(DgtKind::signals, x.slices(), x.n_nodes(), x.n_feats());
}

DgtObject latents_to_dgt(std::span<const Matrix> latents) {
  const std::uint64_t n = latents.empty() ? 0 : static_cast<std::uint64_t>(latents[0].rows());
  return pack_slices(DgtKind::latents, {latents.begin(), latents.end()}, n, n);
}

DgtObject signatures_to_dgt(const Matrix& c) {
  DgtObject obj{DgtKind::signatures, {static_cast<std::uint64_t>(c.rows()), static_cast<std::uint64_t>(c.cols())}, {}};
  obj.data.reserve(static_cast<std::size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) obj.data.push_back(c(i, j));
  }
  return obj;
}

DynTensor dgt_to_tensor(const DgtObject& obj) {
  expect_kind(obj, DgtKind::adjacency);
  auto slices = unpack_slices(obj);
  if (slices.empty()) return DynTensor::zeros(obj.dims[0], 0);
  return DynTensor(std::move(slices));
}

MaskTensor dgt_to_mask(const DgtObject& obj) {
  expect_kind(obj, DgtKind::mask);
  auto slices = unpack_slices(obj);
  if (slices.empty()) return MaskTensor(DynTensor::zeros(obj.dims[0], 0));
  try {
    return MaskTensor(DynTensor(std::move(slices)));
  } catch (const std::invalid_argument& e) {
    throw DgtError(e.what(), 0);
  }
}

SignalTensor dgt_to_signals(const DgtObject& obj) {
  expect_kind(obj, DgtKind::signals);
  return SignalTensor(unpack_slices(obj));
}

std::vector<Matrix> dgt_to_latents(const DgtObject& obj) {
  expect_kind(obj, DgtKind::latents);
  return unpack_slices(obj);
}

Matrix dgt_to_signatures(const DgtObject& obj) {
  expect_kind(obj, DgtKind::signatures);
  Matrix c(static_cast<Eigen::Index>(obj.dims[0]), static_cast<Eigen::Index>(obj.dims[1]));
  std::size_t pos = 0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) c(i, j) = obj.data[pos++];
  }
  return c;
}

Hyperparams parse_hyperparams(std::string_view json_text) {
  Hyperparams h;
  apply_hyperparams(parse_object(json_text, "config"), h);
  return h;
}

std::string hyperparams_to_json(const Hyperparams& h) {
  json j = {{"rank", h.rank},
            {"gamma", h.gamma},
            {"delta", h.delta},
            {"beta", h.beta},
            {"mu", h.mu},
            {"rho", h.rho},
            {"zeta", h.zeta},
            {"eta", h.eta},
            {"lambda_a", h.lambda_a},
            {"lambda_c", h.lambda_c},
            {"step_a", h.step_a},
            {"step_c", h.step_c},
            {"literal_steps", h.literal_steps},
            {"inner_iters", h.inner_iters},
            {"outer_iters", h.outer_iters},
            {"tol_outer", h.tol_outer},
            {"early_exit", h.early_exit},
            {"gradient_mode", to_string(h.gradient_mode)}};
  return j.dump(2);
}

GenerateSpec parse_generate_spec(std::string_view json_text) {
  GenerateSpec g;
  apply_swdyn(parse_object(json_text, "spec"), g.swdyn, &g.observed_frac);
  if (!(g.observed_frac >= 0.0 && g.observed_frac <= 1.0)) throw ConfigError("observed_frac", "must lie in [0, 1]");
  return g;
}

SweepConfig parse_sweep_config(std::string_view json_text) {
  const json j = parse_object(json_text, "config");
  SweepConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "data") {
      if (!v.is_object()) throw ConfigError(key, "expected an object");
      apply_swdyn(v, c.data, nullptr);
    } else if (key == "hyper") {
      if (!v.is_object()) throw ConfigError(key, "expected an object");
      apply_hyperparams(v, c.hyper);
    } else if (key == "observed_frac") {
      c.observed_frac = get_as<double>(v, key);
    } else if (key == "methods") {
      if (!v.is_array()) throw ConfigError(key, "expected an array of method names");
      c.methods.clear();
      for (const auto& m : v) {
        if (!m.is_string()) throw ConfigError(key, "expected an array of method names");
        const auto name = m.get<std::string>();
        bool known = false;
        for (auto k : kMethodNames) known = known || k == name;
        if (!known) throw ConfigError(key, "unknown method '" + name + "'");
        c.methods.push_back(name);
      }
    } else if (key == "seeds") {
      if (!v.is_array()) throw ConfigError(key, "expected an array of seeds");
      c.seeds.clear();
      for (const auto& s : v) c.seeds.push_back(get_as<std::uint64_t>(s, key));
    } else if (key == "baseline_iters") {
      c.baseline_iters = get_as<std::size_t>(v, key);
    } else if (key == "edge_threshold") {
      c.edge_threshold = get_as<double>(v, key);
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }
  return c;
}

void write_history_csv(std::ostream& os, const RunHistory& history) {
  os << "iter,total,fit,sparsity,smoothness,temporal,overlap,ridge_c\n";
  auto row = [&os](std::size_t iter, const ObjectiveBreakdown& o) {
    os << iter << ',' << json(o.total).dump() << ',' << json(o.fit).dump() << ',' << json(o.sparsity).dump() << ','
       << json(o.smoothness).dump() << ',' << json(o.temporal).dump() << ',' << json(o.overlap).dump() << ','
       << json(o.ridge_c).dump() << '\n';
  };
  row(0, history.initial);
  for (const auto& rec : history.iterations) row(rec.iter, rec.objective);
}

std::string eval_report_to_json(const EvalReport& report) {
  std::ostringstream os;
  os << "{\"re\": " << number_or_null(report.re) << ", \"f1\": " << json(report.f1).dump()
     << ", \"precision\": " << json(report.precision).dump() << ", \"recall\": " << json(report.recall).dump()
     << ", \"combined_re\": " << number_or_null(report.combined_re) << ", \"per_component_re\": [";
  for (std::size_t i = 0; i < report.per_component_re.size(); ++i) {
    os << (i ? ", " : "") << number_or_null(report.per_component_re[i]);
  }
  os << "], \"per_component_f1\": " << json(report.per_component_f1).dump()
     << ", \"diagnostics\": " << json(report.diagnostics).dump() << "}";
  return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace dgd
