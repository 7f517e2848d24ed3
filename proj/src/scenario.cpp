#include "rfsense/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "rfsense/error.hpp"

namespace rfsense {
namespace {

struct Field {
  std::string text;
  int line;
  int column;
};

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

int column_of(std::string_view line, std::string_view part) {
  return static_cast<int>(part.data() - line.data()) + 1;
}

[[noreturn]] void fail(std::string_view origin, int line, int column, const std::string& message) {
  std::ostringstream os;
  os << origin << ':' << line << ':' << column << ": " << message;
  throw ParseError(os.str(), line, column);
}

double to_double(std::string_view origin, const Field& f) {
  double value = 0.0;
  const char* first = f.text.data();
  const char* last = first + f.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(origin, f.line, f.column, "expected a number, got '" + f.text + "'");
  return value;
}

long long to_integer(std::string_view origin, const Field& f) {
  long long value = 0;
  const char* first = f.text.data();
  const char* last = first + f.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(origin, f.line, f.column, "expected an integer, got '" + f.text + "'");
  return value;
}

// Splits on commas and/or whitespace, keeping column positions.
std::vector<Field> split_values(std::string_view line, std::string_view part, int line_no) {
  std::vector<Field> out;
  std::size_t i = 0;
  while (i < part.size()) {
    while (i < part.size() && (part[i] == ',' || part[i] == ' ' || part[i] == '\t')) ++i;
    if (i >= part.size()) break;
    const std::size_t start = i;
    while (i < part.size() && part[i] != ',' && part[i] != ' ' && part[i] != '\t') ++i;
    const std::string_view token = part.substr(start, i - start);
    out.push_back({std::string(token), line_no, column_of(line, token)});
  }
  return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"array", {"m", "mprime"}},
      {"objects", {}},
      {"sensors", {"k", "alpha_max", "noise_var"}},
      {"fusion", {"r", "noise_var"}},
      {"limits", {"p_max"}},
      {"demands", {"psi"}},
      {"rng", {"seed"}},
  };
  return keys;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ScenarioFile parse_scenario_text(std::string_view text, std::string_view origin) {
  std::map<std::string, std::map<std::string, Field>> values;
  std::map<std::string, int> section_line;
  std::vector<std::vector<Field>> object_rows;
  std::string section;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string_view content = raw.substr(0, raw.find('#'));
    content = trim(content);
    if (content.empty()) continue;

    if (content.front() == '[') {
      if (content.back() != ']') fail(origin, line_no, column_of(raw, content), "unterminated section header");
      const std::string name(trim(content.substr(1, content.size() - 2)));
      if (!known_keys().contains(name)) {
        fail(origin, line_no, column_of(raw, content), "unknown section [" + name + "]");
      }
      if (section_line.contains(name)) {
        fail(origin, line_no, column_of(raw, content), "duplicate section [" + name + "]");
      }
      section_line[name] = line_no;
      section = name;
      continue;
    }

    if (section.empty()) fail(origin, line_no, column_of(raw, content), "content before the first section");

    if (section == "objects") {
      std::vector<Field> row = split_values(raw, content, line_no);
      if (row.size() != 4) {
        fail(origin, line_no, column_of(raw, content),
             "object rows need 4 fields: kind, azimuth_deg, elevation_deg, q");
      }
      object_rows.push_back(std::move(row));
      continue;
    }

    const auto eq = content.find('=');
    if (eq == std::string_view::npos) fail(origin, line_no, column_of(raw, content), "expected 'key = value'");
    const std::string_view key_view = trim(content.substr(0, eq));
    const std::string_view value_view = trim(content.substr(eq + 1));
    const std::string key(key_view);
    if (!known_keys().at(section).contains(key)) {
      fail(origin, line_no, column_of(raw, key_view.empty() ? content : key_view),
           "unknown key '" + key + "' in [" + section + "]");
    }
    if (values[section].contains(key)) {
      fail(origin, line_no, column_of(raw, key_view), "duplicate key '" + key + "' in [" + section + "]");
    }
    if (value_view.empty()) fail(origin, line_no, column_of(raw, content), "missing value for '" + key + "'");
    values[section][key] = {std::string(value_view), line_no, column_of(raw, value_view)};
  }

  for (const char* required : {"array", "objects", "sensors", "fusion", "limits", "demands"}) {
    if (!section_line.contains(required)) {
      fail(origin, line_no, 1, std::string("missing section [") + required + "]");
    }
  }
  auto need = [&](const std::string& sec, const std::string& key) -> const Field& {
    const auto& m = values[sec];
    const auto it = m.find(key);
    if (it == m.end()) fail(origin, section_line[sec], 1, "missing key '" + key + "' in [" + sec + "]");
    return it->second;
  };
  auto need_int = [&](const std::string& sec, const std::string& key) {
    const Field& f = need(sec, key);
    const long long v = to_integer(origin, f);
    if (v < 1 || v > 1'000'000) fail(origin, f.line, f.column, "'" + key + "' must be a positive integer");
    return static_cast<int>(v);
  };

  ScenarioFile out;
  Scene& scene = out.scene;
  scene.geometry.m_count = need_int("array", "m");
  scene.geometry.mprime_count = need_int("array", "mprime");
  scene.sensors.sensor_count = need_int("sensors", "k");
  scene.sensors.alpha_max = to_double(origin, need("sensors", "alpha_max"));
  scene.sensors.sensor_noise_var = to_double(origin, need("sensors", "noise_var"));
  scene.fusion.antenna_count = need_int("fusion", "r");
  scene.fusion.fc_noise_var = to_double(origin, need("fusion", "noise_var"));
  scene.p_max = to_double(origin, need("limits", "p_max"));

  const Field& psi = need("demands", "psi");
  {
    const std::string line_text(psi.text);
    for (const Field& v : split_values(line_text, line_text, psi.line)) {
      Field shifted = v;
      shifted.column += psi.column - 1;
      scene.sinr_demands.push_back(to_double(origin, shifted));
    }
  }

  if (object_rows.empty()) fail(origin, section_line["objects"], 1, "[objects] has no rows");
  for (const auto& row : object_rows) {
    SceneObject o;
    if (row[0].text == "target") {
      o.kind = ObjectKind::Target;
    } else if (row[0].text == "clutter") {
      o.kind = ObjectKind::Clutter;
    } else {
      fail(origin, row[0].line, row[0].column, "object kind must be 'target' or 'clutter'");
    }
    o.azimuth_deg = to_double(origin, row[1]);
    o.elevation_deg = to_double(origin, row[2]);
    o.response_power = to_double(origin, row[3]);
    scene.objects.push_back(o);
  }
  order_targets_first(scene);

  if (section_line.contains("rng")) {
    const Field& f = need("rng", "seed");
    const long long v = to_integer(origin, f);
    if (v < 0) fail(origin, f.line, f.column, "seed must be nonnegative");
    out.seed = static_cast<std::uint64_t>(v);
  }

  const std::vector<Violation> violations = validate_scene(scene);
  if (has_errors(violations)) {
    std::ostringstream msg;
    msg << origin << ": invalid scene";
    for (const Violation& v : violations) {
      if (v.severity == Severity::Error) msg << "\n  " << v.code << ": " << v.message;
    }
    throw ValidationError(msg.str());
  }
  return out;
}

ScenarioFile parse_scenario(const std::filesystem::path& path) {
  return parse_scenario_text(read_file(path), path.string());
}

std::string format_scenario(const ScenarioFile& file) {
  const Scene& s = file.scene;
  std::ostringstream os;
  os.precision(17);
  os << "[array]\nm = " << s.geometry.m_count << "\nmprime = " << s.geometry.mprime_count << "\n\n";
  os << "[objects]\n";
  for (const SceneObject& o : s.objects) {
    os << (o.kind == ObjectKind::Target ? "target" : "clutter") << ", " << o.azimuth_deg << ", "
       << o.elevation_deg << ", " << o.response_power << '\n';
  }
  os << "\n[sensors]\nk = " << s.sensors.sensor_count << "\nalpha_max = " << s.sensors.alpha_max
     << "\nnoise_var = " << s.sensors.sensor_noise_var << "\n\n";
  os << "[fusion]\nr = " << s.fusion.antenna_count << "\nnoise_var = " << s.fusion.fc_noise_var << "\n\n";
  os << "[limits]\np_max = " << s.p_max << "\n\n[demands]\npsi = ";
  for (std::size_t j = 0; j < s.sinr_demands.size(); ++j) os << (j ? ", " : "") << s.sinr_demands[j];
  os << '\n';
  if (file.seed) os << "\n[rng]\nseed = " << *file.seed << '\n';
  return os.str();
}

ChannelSet parse_channels_text(std::string_view text, const Scene& scene, std::string_view origin) {
  const int objects = scene.object_count();
  const int sensors = scene.sensors.sensor_count;
  const int antennas = scene.fusion.antenna_count;
  ChannelSet out;
  out.g = CMatrix::Zero(objects, sensors);
  out.f.assign(sensors, CVector::Zero(antennas));
  std::set<std::tuple<char, int, int>> seen;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view content = trim(raw.substr(0, raw.find('#')));
    if (content.empty()) continue;

    const std::vector<Field> f = split_values(raw, content, line_no);
    if (f.size() != 5 || (f[0].text != "g" && f[0].text != "f")) {
      fail(origin, line_no, column_of(raw, content), "expected 'g|f <index> <index> <re> <im>'");
    }
    const char which = f[0].text[0];
    const long long a = to_integer(origin, f[1]);
    const long long b = to_integer(origin, f[2]);
    const Complex value(to_double(origin, f[3]), to_double(origin, f[4]));
    const int rows = which == 'g' ? objects : sensors;
    const int cols = which == 'g' ? sensors : antennas;
    if (a < 1 || a > rows) fail(origin, line_no, f[1].column, "index out of range");
    if (b < 1 || b > cols) fail(origin, line_no, f[2].column, "index out of range");
    if (!seen.emplace(which, static_cast<int>(a), static_cast<int>(b)).second) {
      fail(origin, line_no, f[0].column, "duplicate channel entry");
    }
    if (which == 'g') {
      out.g(a - 1, b - 1) = value;
    } else {
      out.f[a - 1](b - 1) = value;
    }
  }
  const std::size_t expected =
      static_cast<std::size_t>(objects) * sensors + static_cast<std::size_t>(sensors) * antennas;
  if (seen.size() != expected) {
    std::ostringstream msg;
    msg << "channel file lists " << seen.size() << " entries, scene needs " << expected;
    fail(origin, line_no, 1, msg.str());
  }
  return out;
}

ChannelSet parse_channels(const std::filesystem::path& path, const Scene& scene) {
  return parse_channels_text(read_file(path), scene, path.string());
}

}  // namespace rfsense
