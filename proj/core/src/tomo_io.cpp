#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "fourphoton/errors.hpp"
#include "fourphoton/tomo.hpp"

namespace fourphoton {

void write_counts_csv(std::ostream& os, const std::vector<CountRecord>& records) {
  os << "setting,outcome,count\n";
  for (const auto& r : records) {
    const std::string s = to_string(r.setting);
    for (std::size_t o = 0; o < 16; ++o) {
      os << s << ',' << outcome_label(o) << ',' << r.counts[o] << '\n';
    }
  }
  if (!os) throw IoError("failed writing count records");
}

std::vector<CountRecord> read_counts_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("count file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "setting,outcome,count") {
    throw std::invalid_argument("count file header must be 'setting,outcome,count'");
  }
  std::map<std::size_t, CountRecord> by_setting;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string setting, outcome, count;
    if (!std::getline(row, setting, ',') || !std::getline(row, outcome, ',') ||
        !std::getline(row, count)) {
      throw std::invalid_argument("malformed count row at line " + std::to_string(lineno));
    }
    const MeasurementSetting s = parse_setting(setting);
    const std::size_t o = parse_outcome(outcome);
    std::size_t used = 0;
    unsigned long long c = 0;
    try {
      c = std::stoull(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != count.size() || count.empty() || count.front() == '-') {
      throw std::invalid_argument("invalid count at line " + std::to_string(lineno));
    }
    auto [it, inserted] = by_setting.try_emplace(setting_index(s));
    it->second.setting = s;
    it->second.counts[o] += c;
  }
  std::vector<CountRecord> out;
  for (auto& [idx, rec] : by_setting) {
    double total = 0.0;
    for (auto c : rec.counts) total += static_cast<double>(c);
    rec.expected_total = total;
    out.push_back(rec);
  }
  return out;
}

std::string density_to_json(const DensityMatrix& rho) {
  nlohmann::ordered_json j;
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (std::size_t r = 0; r < 16; ++r) {
    nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
    for (std::size_t c = 0; c < 16; ++c) {
      rr.push_back(rho(r, c).real());
      ii.push_back(rho(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  j["real"] = std::move(re);
  j["imag"] = std::move(im);
  return j.dump();
}

DensityMatrix density_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("density matrix is not valid JSON: ") + e.what());
  }
  auto grid = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 16) {
      throw std::invalid_argument(std::string("density JSON needs a 16x16 '") + key + "' array");
    }
    return j[key];
  };
  const auto re = grid("real"), im = grid("imag");
  Matrix16 m;
  for (std::size_t r = 0; r < 16; ++r) {
    if (!re[r].is_array() || re[r].size() != 16 || !im[r].is_array() || im[r].size() != 16) {
      throw std::invalid_argument("density JSON rows must have 16 entries");
    }
    for (std::size_t c = 0; c < 16; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(re[r][c].get<double>(), im[r][c].get<double>());
    }
  }
  return DensityMatrix(m);
}

}  // namespace fourphoton
