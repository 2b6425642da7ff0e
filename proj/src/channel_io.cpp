#include "spb/channel_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spb {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("parse error in " + path + ": " + e.what());
  }
  return j;
}

Alphabet labels_of(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_array())
    throw ValidationError("channel file: missing label array " + field);
  Alphabet a;
  for (const auto& v : j[field]) {
    if (!v.is_string())
      throw ValidationError("channel file: non-string label in " + field);
    a.push_back(v.get<std::string>());
  }
  return a;
}

// numbers may appear as decimal strings; convert exactly once
double number_of(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t used = 0;
    double d = std::stod(s, &used);
    if (used != s.size())
      throw ValidationError("channel file: bad decimal '" + s + "' in " + where);
    return d;
  }
  throw ValidationError("channel file: non-numeric entry in " + where);
}

Seq seq_of_labels(const json& arr, const Alphabet& a, const std::string& where) {
  Seq s;
  for (const auto& v : arr) {
    if (!v.is_string()) throw ValidationError("code file: non-string symbol in " + where);
    auto it = std::find(a.begin(), a.end(), v.get<std::string>());
    if (it == a.end())
      throw ValidationError("code file: unknown symbol '" + v.get<std::string>() +
                            "' in " + where);
    s.push_back(int(it - a.begin()));
  }
  return s;
}

}  // namespace

Mac parse_channel(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("channel parse error: ") + e.what());
  }
  Alphabet ax = labels_of(j, "X"), ay = labels_of(j, "Y"), az = labels_of(j, "Z");
  if (!j.contains("W") || !j["W"].is_array())
    throw ValidationError("channel file: missing transition array W");
  const auto& W = j["W"];
  if (W.size() != ax.size())
    throw ValidationError("channel file: W has wrong x-dimension");
  std::vector<double> w;
  w.reserve(ax.size() * ay.size() * az.size());
  for (std::size_t x = 0; x < ax.size(); ++x) {
    if (!W[x].is_array() || W[x].size() != ay.size())
      throw ValidationError("channel file: W[" + ax[x] + "] has wrong y-dimension");
    for (std::size_t y = 0; y < ay.size(); ++y) {
      const auto& row = W[x][y];
      std::string where = "W[" + ax[x] + "][" + ay[y] + "]";
      if (!row.is_array() || row.size() != az.size())
        throw ValidationError("channel file: row " + where + " has wrong z-dimension");
      double sum = 0.0;
      for (const auto& v : row) {
        double d = number_of(v, where);
        if (d < 0.0)
          throw ValidationError("channel file: negative entry in row " + where);
        w.push_back(d);
        sum += d;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "channel file: row " << where << " sums to " << sum << ", not 1";
        throw ValidationError(os.str());
      }
    }
  }
  return Mac(std::move(ax), std::move(ay), std::move(az), std::move(w));
}

Mac load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open channel file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_channel(os.str());
}

MultiUserCode load_code(const std::string& path, const Mac& w) {
  json j = read_json(path);
  MultiUserCode c;
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ValidationError("code file: missing n");
  c.n = j["n"].get<int>();
  if (c.n < 1) throw ValidationError("code file: n must be positive");
  for (const auto& arr : j.at("codebook_x")) {
    Seq s = seq_of_labels(arr, w.x(), "codebook_x");
    if (int(s.size()) != c.n) throw ValidationError("code file: codeword length != n");
    c.codebook_x.push_back(std::move(s));
  }
  for (const auto& arr : j.at("codebook_y")) {
    Seq s = seq_of_labels(arr, w.y(), "codebook_y");
    if (int(s.size()) != c.n) throw ValidationError("code file: codeword length != n");
    c.codebook_y.push_back(std::move(s));
  }
  if (c.codebook_x.empty() || c.codebook_y.empty())
    throw ValidationError("code file: empty codebook");
  const auto& dec = j.at("decoder");
  if (dec.is_string() && dec.get<std::string>() == "ML") {
    c.ml = true;
  } else if (dec.is_array()) {
    c.ml = false;
    std::uint64_t zn = pow_checked(w.nz(), c.n);
    if (dec.size() != zn)
      throw ValidationError("code file: partition size != |Z|^n");
    int m = int(c.mx() * c.my());
    for (const auto& v : dec) {
      int p = v.get<int>();
      if (p < -1 || p >= m) throw ValidationError("code file: partition entry out of range");
      c.partition.push_back(p);
    }
  } else {
    throw ValidationError("code file: decoder must be \"ML\" or a partition array");
  }
  return c;
}

std::string code_to_text(const MultiUserCode& code, const Mac& w) {
  json j;
  j["n"] = code.n;
  auto book = [&](const std::vector<Seq>& cb, const Alphabet& a) {
    json arr = json::array();
    for (const Seq& s : cb) {
      json word = json::array();
      for (int sym : s) word.push_back(a[std::size_t(sym)]);
      arr.push_back(std::move(word));
    }
    return arr;
  };
  j["codebook_x"] = book(code.codebook_x, w.x());
  j["codebook_y"] = book(code.codebook_y, w.y());
  if (code.ml)
    j["decoder"] = "ML";
  else
    j["decoder"] = code.partition;
  return j.dump(2) + "\n";
}

void save_code(const std::string& path, const MultiUserCode& code, const Mac& w) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open output file: " + path);
  out << code_to_text(code, w);
}

}  // namespace spb
