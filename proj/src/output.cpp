#include "bcilm/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bcilm/csv.hpp"
#include "bcilm/error.hpp"

#ifndef BCILM_VERSION_STRING
#define BCILM_VERSION_STRING "unknown"
#endif

namespace bcilm {

const char* version_string() { return BCILM_VERSION_STRING; }

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return fnv1a_hex(ss.str());
}

std::string chain_csv(const PosteriorSample& sample) {
  std::string out = "iteration";
  for (const auto& n : sample.names) out += "," + n;
  out += ",logpost\n";
  for (std::size_t it = 0; it < sample.iterations(); ++it) {
    out += std::to_string(it + 1);
    for (std::size_t k = 0; k < sample.names.size(); ++k) out += "," + csv::format(sample.at(it, k));
    out += "," + csv::format(sample.log_posterior[it]) + "\n";
  }
  return out;
}

PosteriorSample read_chain(const std::filesystem::path& path, std::size_t burn_in, const ModelParams& fixed) {
  const csv::Table t = csv::read(path);
  if (t.header.size() < 3 || t.header.front() != "iteration" || t.header.back() != "logpost")
    throw ParseError(path.string() + ": expected header iteration,<parameters>,logpost");
  PosteriorSample s;
  s.names.assign(t.header.begin() + 1, t.header.end() - 1);
  for (const auto& n : s.names) fixed.get(n);  // rejects unknown names
  s.fixed = fixed;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (csv::to_int(t, r, 0) != static_cast<long long>(r + 1))
      throw ParseError(t.where(r) + ": iterations must be numbered 1, 2, ...");
    for (std::size_t k = 0; k < s.names.size(); ++k) s.draws.push_back(csv::to_double(t, r, k + 1));
    s.log_posterior.push_back(csv::to_double(t, r, t.header.size() - 1));
    s.log_likelihood.push_back(std::nan(""));
  }
  if (burn_in >= s.iterations())
    throw ValidationError(path.string() + ": burn-in " + std::to_string(burn_in) + " leaves no draws");
  s.burn_in = burn_in;
  return s;
}

std::string geweke_csv(const PosteriorSample& sample) {
  std::string out = "parameter,z,stuck,converged\n";
  for (std::size_t k = 0; k < sample.names.size() && k < sample.geweke.size(); ++k) {
    const auto& g = sample.geweke[k];
    const bool ok = !g.stuck && std::isfinite(g.z) && std::abs(g.z) < 3.0;
    out += sample.names[k] + "," + csv::format(g.z) + "," + (g.stuck ? "1" : "0") + "," + (ok ? "1" : "0") + "\n";
  }
  return out;
}

std::string band_csv(const CurveBand& band) {
  std::string out = "t,lower,median,upper\n";
  for (std::size_t k = 0; k < band.size(); ++k)
    out += std::to_string(band.t[k]) + "," + csv::format(band.lower[k]) + "," + csv::format(band.median[k]) + "," +
           csv::format(band.upper[k]) + "\n";
  return out;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string band_svg(const CurveBand& band, const std::vector<int>& observed_t,
                     const std::vector<int>& observed_counts, const std::string& title) {
  const double w = 640, h = 400, left = 50, right = 20, top = 40, bottom = 40;
  int t0 = band.t.empty() ? 0 : band.t.front();
  int t1 = band.t.empty() ? 1 : band.t.back();
  double ymax = 1.0;
  for (double v : band.upper) ymax = std::max(ymax, v);
  for (std::size_t k = 0; k < observed_t.size(); ++k) {
    t0 = std::min(t0, observed_t[k]);
    t1 = std::max(t1, observed_t[k]);
    ymax = std::max(ymax, static_cast<double>(observed_counts[k]));
  }
  if (t1 == t0) t1 = t0 + 1;
  auto px = [&](double t) { return left + (t - t0) / (t1 - t0) * (w - left - right); };
  auto py = [&](double y) { return h - bottom - y / ymax * (h - top - bottom); };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
    << " " << h << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << xml_escape(title) << "</text>\n"
    << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
    << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << left - 6 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
    << "font-size=\"10\">" << num(ymax) << "</text>\n"
    << "<text x=\"" << px(t0) << "\" y=\"" << h - bottom + 14 << "\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"10\">" << t0 << "</text>\n"
    << "<text x=\"" << px(t1) << "\" y=\"" << h - bottom + 14 << "\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"10\">" << t1 << "</text>\n";
  if (!band.t.empty()) {
    s << "<polygon fill=\"#9ecae1\" fill-opacity=\"0.6\" stroke=\"none\" points=\"";
    for (std::size_t k = 0; k < band.size(); ++k) s << num(px(band.t[k])) << "," << num(py(band.upper[k])) << " ";
    for (std::size_t k = band.size(); k-- > 0;) s << num(px(band.t[k])) << "," << num(py(band.lower[k])) << " ";
    s << "\"/>\n<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < band.size(); ++k) s << num(px(band.t[k])) << "," << num(py(band.median[k])) << " ";
    s << "\"/>\n";
  }
  if (!observed_t.empty()) {
    s << "<polyline fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 3\" points=\"";
    for (std::size_t k = 0; k < observed_t.size(); ++k)
      s << num(px(observed_t[k])) << "," << num(py(observed_counts[k])) << " ";
    s << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string Manifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = version;
  j["config_hash"] = config_hash;
  j["seeds"] = seeds;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["info"] = info;
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Manifest m;
    m.command = j.value("command", "");
    m.version = j.value("version", "");
    m.config_hash = j.value("config_hash", "");
    if (j.contains("seeds")) m.seeds = j["seeds"].get<std::map<std::string, std::uint64_t>>();
    if (j.contains("inputs")) m.inputs = j["inputs"].get<std::map<std::string, std::string>>();
    if (j.contains("outputs")) m.outputs = j["outputs"].get<std::map<std::string, std::string>>();
    if (j.contains("info")) m.info = j["info"].get<std::map<std::string, std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed manifest: ") + e.what());
  }
}

std::optional<Manifest> Manifest::load(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace bcilm
