#include "arat/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "arat/error.hpp"

namespace arat {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::kParse, what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    bad(where + ": missing \"" + key + "\"");
  }
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + ": expected a number");
  return v.get<double>();
}

Vector number_array(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where + ": expected an array");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) =
        number(v[k], where + "[" + std::to_string(k + 1) + "]");
  }
  return out;
}

void read_player(const json& p, const std::string& where, std::size_t d,
                 Vector& rewards, Matrix& transitions) {
  rewards = number_array(field(p, "rewards", where), where + ".rewards");
  const json& rows = field(p, "transitions", where);
  if (!rows.is_array()) bad(where + ".transitions: expected an array");
  if (rows.size() != static_cast<std::size_t>(rewards.size())) {
    bad(where + ": " + std::to_string(rewards.size()) + " rewards but " +
        std::to_string(rows.size()) + " transition rows");
  }
  transitions.resize(rewards.size(), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string at = where + ".transitions[" + std::to_string(i + 1) + "]";
    const Vector row = number_array(rows[i], at);
    if (static_cast<std::size_t>(row.size()) != d) {
      bad(at + ": expected " + std::to_string(d) + " entries");
    }
    transitions.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
}

json player_json(const Vector& r, const Matrix& p) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < p.cols(); ++c) row.push_back(p(i, c));
    rows.push_back(std::move(row));
  }
  json rewards = json::array();
  for (Eigen::Index i = 0; i < r.size(); ++i) rewards.push_back(r(i));
  return {{"rewards", rewards}, {"transitions", rows}};
}

}  // namespace

AratGame parse_game_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(e.what());
  }
  AratGame game;
  game.beta = number(field(doc, "beta", "document"), "beta");
  const json& states = field(doc, "states", "document");
  if (!states.is_array() || states.empty()) {
    bad("states: expected a non-empty array");
  }
  const std::size_t d = states.size();
  for (std::size_t s = 0; s < d; ++s) {
    const std::string where = "states[" + std::to_string(s + 1) + "]";
    Vector r1, r2;
    Matrix p1, p2;
    read_player(field(states[s], "playerI", where), where + ".playerI", d, r1,
                p1);
    read_player(field(states[s], "playerII", where), where + ".playerII", d,
                r2, p2);
    game.r1.push_back(std::move(r1));
    game.r2.push_back(std::move(r2));
    game.p1.push_back(std::move(p1));
    game.p2.push_back(std::move(p2));
  }
  return game;
}

AratGame load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_game_json(buf.str());
}

std::string game_to_json(const AratGame& game, int indent) {
  json states = json::array();
  for (std::size_t s = 0; s < game.num_states(); ++s) {
    states.push_back({{"playerI", player_json(game.r1[s], game.p1[s])},
                      {"playerII", player_json(game.r2[s], game.p2[s])}});
  }
  const json doc = {{"beta", game.beta}, {"states", states}};
  return doc.dump(indent);
}

Vector parse_csv_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      bad("not a number: \"" + item + "\"");
    }
    if (item.find_first_not_of(" \t\r\n", used) != std::string::npos) {
      bad("not a number: \"" + item + "\"");
    }
    values.push_back(v);
  }
  if (values.empty()) bad("empty vector");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_trace_csv(std::ostream& out, const TraceResult& result) {
  const std::size_t n = result.path.empty() ? 0 : result.path.front().point.n();
  out << "step,t,residual,step_length,det_sign";
  for (const char* name : {"x", "y1", "y2"}) {
    for (std::size_t i = 1; i <= n; ++i) out << ',' << name << '_' << i;
  }
  out << '\n';
  std::ostringstream row;
  row << std::scientific << std::setprecision(16);
  for (const PathPoint& p : result.path) {
    row.str("");
    row << p.step_index << ',' << p.point.t << ',' << p.residual << ','
        << p.step_length << ',' << p.det_sign;
    for (Eigen::Index i = 0; i < p.point.u.size(); ++i) row << ',' << p.point.u(i);
    out << row.str() << '\n';
  }
}

}  // namespace arat
