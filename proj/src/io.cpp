#include "isarff/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace isarff::io {

namespace {

class Writer
{
public:
  void bytes(const void* p, std::size_t n)
  {
    const auto* c = static_cast<const char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  void u32(std::uint32_t v)
  {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    bytes(b, 4);
  }
  void u16(std::uint16_t v)
  {
    const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    bytes(b, 2);
  }
  void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void magic(const char* m) { bytes(m, 6); }

  void save(const fs::path& path) const
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out) throw FormatError("failed writing " + path.string());
  }

private:
  std::vector<char> buf_;
};

class Reader
{
public:
  explicit Reader(const fs::path& path) : name_(path.string())
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + name_);
    buf_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  const unsigned char* take(std::size_t n)
  {
    if (pos_ + n > buf_.size()) throw FormatError(name_ + ": truncated file");
    const auto* p = reinterpret_cast<const unsigned char*>(buf_.data() + pos_);
    pos_ += n;
    return p;
  }
  std::uint32_t u32()
  {
    const auto* b = take(4);
    return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  std::uint16_t u16()
  {
    const auto* b = take(2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }
  double f32() { return static_cast<double>(std::bit_cast<float>(u32())); }
  std::uint8_t u8() { return *take(1); }
  void magic(const char* expected)
  {
    if (std::memcmp(take(6), expected, 6) != 0) throw FormatError(name_ + ": expected magic " + expected);
  }
  void finish() const
  {
    if (pos_ != buf_.size()) throw FormatError(name_ + ": trailing bytes");
  }

private:
  std::string name_;
  std::vector<char> buf_;
  std::size_t pos_{0};
};

void header(Writer& w, const char* magic, Eigen::Index rows, Eigen::Index cols)
{
  w.magic(magic);
  w.u32(static_cast<std::uint32_t>(rows));
  w.u32(static_cast<std::uint32_t>(cols));
}

void trailer(Writer& w, const RasterMeta& meta)
{
  w.f32(meta.range_spacing);
  w.f32(meta.crossrange_spacing);
  w.u32(static_cast<std::uint32_t>(meta.frame_index));
}

RasterMeta read_trailer(Reader& r)
{
  RasterMeta m;
  m.range_spacing = r.f32();
  m.crossrange_spacing = r.f32();
  m.frame_index = static_cast<int>(r.u32());
  return m;
}

std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text, const std::string& expected_header)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty CSV; expected header " + expected_header);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) throw FormatError("unexpected CSV header '" + line + "'");
  const std::size_t fields = split_csv(expected_header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto f = split_csv(line);
    if (f.size() != fields) throw FormatError("CSV row has " + std::to_string(f.size()) + " fields: " + line);
    rows.push_back(std::move(f));
  }
  return rows;
}

double to_double(const std::string& s)
{
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw FormatError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw FormatError("not a number: '" + s + "'");
  return v;
}

int to_int(const std::string& s)
{
  const double v = to_double(s);
  if (v != std::floor(v)) throw FormatError("not an integer: '" + s + "'");
  return static_cast<int>(v);
}

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

std::string format_double(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_complex_frame(const fs::path& path, const ComplexFrame& frame)
{
  Writer w;
  header(w, kComplexMagic, frame.pixels.rows(), frame.pixels.cols());
  for (Eigen::Index i = 0; i < frame.pixels.size(); ++i) {
    w.f32(frame.pixels(i).real());
    w.f32(frame.pixels(i).imag());
  }
  trailer(w, {frame.range_spacing, frame.crossrange_spacing, frame.frame_index});
  w.save(path);
}

ComplexFrame read_complex_frame(const fs::path& path)
{
  Reader r(path);
  r.magic(kComplexMagic);
  const auto rows = r.u32(), cols = r.u32();
  ComplexFrame f;
  f.pixels.resize(rows, cols);
  for (Eigen::Index i = 0; i < f.pixels.size(); ++i) {
    const double re = r.f32();
    const double im = r.f32();
    f.pixels(i) = {re, im};
  }
  const RasterMeta m = read_trailer(r);
  r.finish();
  f.range_spacing = m.range_spacing;
  f.crossrange_spacing = m.crossrange_spacing;
  f.frame_index = m.frame_index;
  return f;
}

void write_real_raster(const fs::path& path, const char* magic, const ImageD& pixels, const RasterMeta& meta)
{
  Writer w;
  header(w, magic, pixels.rows(), pixels.cols());
  for (Eigen::Index i = 0; i < pixels.size(); ++i) w.f32(pixels(i));
  trailer(w, meta);
  w.save(path);
}

ImageD read_real_raster(const fs::path& path, const char* magic, RasterMeta* meta)
{
  Reader r(path);
  r.magic(magic);
  const auto rows = r.u32(), cols = r.u32();
  ImageD px(rows, cols);
  for (Eigen::Index i = 0; i < px.size(); ++i) px(i) = r.f32();
  const RasterMeta m = read_trailer(r);
  r.finish();
  if (meta) *meta = m;
  return px;
}

void write_intensity_frame(const fs::path& path, const IntensityFrame& frame)
{
  write_real_raster(path, kIntensityMagic, frame.pixels,
                    {frame.range_spacing, frame.crossrange_spacing, frame.frame_index});
}

IntensityFrame read_intensity_frame(const fs::path& path)
{
  RasterMeta m;
  IntensityFrame f;
  f.pixels = read_real_raster(path, kIntensityMagic, &m);
  f.range_spacing = m.range_spacing;
  f.crossrange_spacing = m.crossrange_spacing;
  f.frame_index = m.frame_index;
  return f;
}

void write_mask(const fs::path& path, const Mask& mask, const RasterMeta& meta)
{
  Writer w;
  header(w, kMaskMagic, mask.rows(), mask.cols());
  for (Eigen::Index i = 0; i < mask.size(); ++i) w.u8(mask(i) ? 1 : 0);
  trailer(w, meta);
  w.save(path);
}

Mask read_mask(const fs::path& path, RasterMeta* meta)
{
  Reader r(path);
  r.magic(kMaskMagic);
  const auto rows = r.u32(), cols = r.u32();
  Mask m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = r.u8();
  const RasterMeta rm = read_trailer(r);
  r.finish();
  if (meta) *meta = rm;
  return m;
}

void write_feature_map(const fs::path& path, const LabelMap& map)
{
  Writer w;
  header(w, kFeatureMapMagic, map.rows(), map.cols());
  for (Eigen::Index i = 0; i < map.size(); ++i) w.u16(map(i));
  w.save(path);
}

LabelMap read_feature_map(const fs::path& path)
{
  Reader r(path);
  r.magic(kFeatureMapMagic);
  const auto rows = r.u32(), cols = r.u32();
  LabelMap m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = r.u16();
  r.finish();
  return m;
}

static const char* kModelHeader = "x_m,y_m,z_m,amplitude,nx,ny,nz";

void write_model_csv(const fs::path& path, const ScattererModel& model)
{
  std::ostringstream out;
  out << kModelHeader << '\n';
  for (const auto& s : model.scatterers) {
    out << format_double(s.position.x()) << ',' << format_double(s.position.y()) << ','
        << format_double(s.position.z()) << ',' << format_double(s.amplitude) << ',';
    if (s.normal)
      out << format_double(s.normal->x()) << ',' << format_double(s.normal->y()) << ',' << format_double(s.normal->z());
    else
      out << ",,";
    out << '\n';
  }
  write_text(path, out.str());
}

ScattererModel read_model_csv(const fs::path& path)
{
  ScattererModel model;
  model.name = path.stem().string();
  for (const auto& f : csv_rows(read_text(path), kModelHeader)) {
    Scatterer s;
    s.position = {to_double(trim(f[0])), to_double(trim(f[1])), to_double(trim(f[2]))};
    s.amplitude = to_double(trim(f[3]));
    if (!s.position.allFinite()) throw FormatError("scatterer position must be finite");
    if (!(s.amplitude >= 0.0)) throw FormatError("scatterer amplitude must be non-negative");
    const bool blank = trim(f[4]).empty() && trim(f[5]).empty() && trim(f[6]).empty();
    if (!blank) {
      Eigen::Vector3d n(to_double(trim(f[4])), to_double(trim(f[5])), to_double(trim(f[6])));
      if (!(n.norm() > 0.0)) throw FormatError("scatterer normal must be non-zero");
      s.normal = n;
    }
    model.scatterers.push_back(s);
  }
  return model;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text)
{
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError("duplicate config key '" + key + "'");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::string read_text(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << text;
}

EncounterConfig parse_encounter(const std::string& text)
{
  EncounterConfig c;
  std::map<std::string, double*> reals = {
      {"centre_frequency_hz", &c.centre_frequency_hz}, {"bandwidth_hz", &c.bandwidth_hz},
      {"total_aspect_span_deg", &c.total_aspect_span_deg}, {"integration_angle_deg", &c.integration_angle_deg},
      {"grazing_start_deg", &c.grazing_start_deg}, {"grazing_end_deg", &c.grazing_end_deg}};
  std::map<std::string, int*> ints = {{"frequency_samples", &c.frequency_samples},
                                      {"angle_samples_per_frame", &c.angle_samples_per_frame}};
  std::set<std::string> missing;
  for (auto& [k, v] : reals) missing.insert(k);
  for (auto& [k, v] : ints) missing.insert(k);
  for (const auto& [key, value] : parse_key_values(text)) {
    try {
      if (auto it = reals.find(key); it != reals.end()) *it->second = to_double(value);
      else if (auto jt = ints.find(key); jt != ints.end()) *jt->second = to_int(value);
      else throw ConfigError("unknown encounter key '" + key + "'");
    } catch (const FormatError& e) {
      throw ConfigError("encounter key '" + key + "': " + e.what());
    }
    missing.erase(key);
  }
  if (!missing.empty()) throw ConfigError("missing encounter key '" + *missing.begin() + "'");
  c.validate();
  return c;
}

std::string format_encounter(const EncounterConfig& c)
{
  std::ostringstream out;
  out << "centre_frequency_hz = " << format_double(c.centre_frequency_hz) << '\n'
      << "bandwidth_hz = " << format_double(c.bandwidth_hz) << '\n'
      << "frequency_samples = " << c.frequency_samples << '\n'
      << "angle_samples_per_frame = " << c.angle_samples_per_frame << '\n'
      << "total_aspect_span_deg = " << format_double(c.total_aspect_span_deg) << '\n'
      << "integration_angle_deg = " << format_double(c.integration_angle_deg) << '\n'
      << "grazing_start_deg = " << format_double(c.grazing_start_deg) << '\n'
      << "grazing_end_deg = " << format_double(c.grazing_end_deg) << '\n';
  return out.str();
}

std::string alignment_csv(const AlignedSequence& seq)
{
  std::ostringstream out;
  out << "frame,theta_deg,cx,cy,dx,dy,sx_px,sy_px,status\n";
  for (std::size_t i = 0; i < seq.params.size(); ++i) {
    const auto& p = seq.params[i];
    out << seq.frames[i].frame_index << ',' << format_double(rad2deg(p.theta)) << ',' << format_double(p.cx) << ','
        << format_double(p.cy) << ',' << format_double(p.dx) << ',' << format_double(p.dy) << ','
        << format_double(p.sx) << ',' << format_double(p.sy) << ','
        << (seq.status[i] == FrameStatus::ok ? "ok" : "unaligned") << '\n';
  }
  return out.str();
}

static const char* kFeatureHeader = "frame,rho_px,theta_deg,strength,seg_start_x,seg_start_y,seg_end_x,seg_end_y";

std::string feature_csv(const std::vector<LineFeature>& features)
{
  std::ostringstream out;
  out << kFeatureHeader << '\n';
  for (const auto& f : features)
    for (const auto& s : f.segments)
      out << f.frame_index << ',' << format_double(f.rho) << ',' << format_double(f.theta_deg) << ','
          << format_double(f.strength) << ',' << format_double(s.start.x()) << ',' << format_double(s.start.y())
          << ',' << format_double(s.end.x()) << ',' << format_double(s.end.y()) << '\n';
  return out.str();
}

std::vector<LineFeature> parse_feature_csv(const std::string& text)
{
  std::vector<LineFeature> out;
  for (const auto& f : csv_rows(text, kFeatureHeader)) {
    const int frame = to_int(f[0]);
    const double rho = to_double(f[1]), theta = to_double(f[2]), strength = to_double(f[3]);
    const Eigen::Vector2d a(to_double(f[4]), to_double(f[5])), b(to_double(f[6]), to_double(f[7]));
    // Consecutive rows with the same line belong to one feature.
    if (out.empty() || out.back().frame_index != frame || out.back().rho != rho || out.back().theta_deg != theta ||
        out.back().strength != strength)
      out.push_back({rho, theta, strength, {}, frame});
    const Eigen::Vector2d dir = line_point(0.0, theta, 1.0);
    out.back().segments.push_back({a.dot(dir), b.dot(dir), a, b});
  }
  return out;
}

static const char* kClusterHeader = "cluster_id,frame,rho_px,theta_deg,strength,is_noise";

std::string cluster_csv(const std::vector<FeatureCluster>& clusters, const std::vector<LineFeature>& features)
{
  std::ostringstream out;
  out << kClusterHeader << '\n';
  for (const auto& c : clusters)
    for (const auto& m : c.members) {
      const auto& f = features.at(static_cast<std::size_t>(m.feature_ref));
      out << c.id << ',' << m.frame_index << ',' << format_double(f.rho) << ',' << format_double(m.theta_deg())
          << ',' << format_double(f.strength) << ',' << (c.noise ? 1 : 0) << '\n';
    }
  return out.str();
}

std::vector<ClusterRow> parse_cluster_csv(const std::string& text)
{
  std::vector<ClusterRow> out;
  for (const auto& f : csv_rows(text, kClusterHeader))
    out.push_back({to_int(f[0]), to_int(f[1]), to_double(f[2]), to_double(f[3]), to_double(f[4]), to_int(f[5]) != 0});
  return out;
}

std::string kinematics_csv(const std::vector<KinematicsRow>& rows)
{
  std::ostringstream out;
  out << "cluster_id,frames,pv,phi_deg,label\n";
  for (const auto& r : rows)
    out << r.cluster_id << ',' << r.kinematics.frame_count << ',' << format_double(r.kinematics.variance_fraction)
        << ',' << format_double(r.kinematics.divergence_deg) << ',' << to_string(r.label) << '\n';
  return out.str();
}

} // namespace isarff::io
