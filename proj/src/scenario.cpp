#include "quadmpc/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace quadmpc {

namespace {

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("scenario line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& tok, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) fail(line, "trailing junk in number '" + tok + "'");
  return v;
}

std::vector<double> parse_row(const std::string& body, int line) {
  std::vector<double> out;
  std::istringstream iss(body);
  std::string tok;
  while (iss >> tok) out.push_back(parse_number(tok, line));
  return out;
}

}  // namespace

GaitSchedule Scenario::gait_schedule() const {
  const double duty = duty_factor > 0.0 ? duty_factor : 0.5;
  return GaitSchedule::make(gait, cycle_period, duty);
}

void Scenario::validate() const {
  if (!(duration > 0.0)) {
    throw std::invalid_argument("scenario: duration must be positive");
  }
  if (!(cycle_period > 0.0)) {
    throw std::invalid_argument("scenario: cycle_period must be positive");
  }
  if (duty_factor > 0.0 && duty_factor > 1.0) {
    throw std::invalid_argument("scenario: duty_factor must be in (0, 1]");
  }
  double prev = -1.0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const double s = commands[i].start;
    if (s < 0.0 || s >= duration) {
      throw std::invalid_argument("scenario: command segment " +
                                  std::to_string(i) + " start time outside run");
    }
    if (s <= prev && i > 0) {
      throw std::invalid_argument("scenario: command segment " +
                                  std::to_string(i) +
                                  " start time out of order");
    }
    prev = s;
  }
  for (std::size_t i = 0; i < disturbances.size(); ++i) {
    const double s = disturbances[i].time;
    if (s < 0.0 || s > duration) {
      throw std::invalid_argument("scenario: disturbance " + std::to_string(i) +
                                  " time outside run");
    }
  }
  if (!(mass_scale > 0.0) || !(inertia_scale > 0.0)) {
    throw std::invalid_argument("scenario: perturbation scales must be positive");
  }
}

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;

  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trimmed(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trimmed(s.substr(1, s.size() - 2));
      if (section != "command" && section != "disturbance" &&
          section != "perturbation" && section != "initial" &&
          section != "footholds") {
        fail(line, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = s.find('=');
    if (section == "command") {
      const std::vector<double> row = parse_row(s, line);
      if (row.size() != 4) fail(line, "command row needs: start vx vy yaw_rate");
      sc.commands.push_back({row[0], {row[1], row[2], row[3]}});
    } else if (section == "disturbance") {
      const std::vector<double> row = parse_row(s, line);
      if (row.size() != 7) {
        fail(line, "disturbance row needs: time impulse_xyz offset_xyz");
      }
      sc.disturbances.push_back(
          {row[0], {row[1], row[2], row[3]}, {row[4], row[5], row[6]}});
    } else if (section == "footholds") {
      const std::vector<double> row = parse_row(s, line);
      if (row.size() != 1) fail(line, "foothold row needs a single height");
      sc.foothold_heights.push_back(row[0]);
    } else if (eq == std::string::npos) {
      fail(line, "expected key = value");
    } else {
      const std::string key = trimmed(s.substr(0, eq));
      const std::string value = trimmed(s.substr(eq + 1));
      if (section.empty()) {
        if (key == "name") {
          sc.name = value;
        } else if (key == "gait") {
          try {
            sc.gait = gait_from_name(value);
          } catch (const std::invalid_argument& e) {
            fail(line, e.what());
          }
        } else if (key == "duration") {
          sc.duration = parse_number(value, line);
        } else if (key == "cycle_period") {
          sc.cycle_period = parse_number(value, line);
        } else if (key == "duty_factor") {
          sc.duty_factor = parse_number(value, line);
        } else {
          fail(line, "unknown key '" + key + "'");
        }
      } else if (section == "perturbation") {
        if (key == "mass_scale") {
          sc.mass_scale = parse_number(value, line);
        } else if (key == "inertia_scale") {
          sc.inertia_scale = parse_number(value, line);
        } else {
          fail(line, "unknown key '" + key + "' in [perturbation]");
        }
      } else if (section == "initial") {
        const std::vector<double> row = parse_row(value, line);
        if (key == "position" && row.size() == 3) {
          sc.initial_position = Vec3(row[0], row[1], row[2]);
        } else if (key == "velocity" && row.size() == 3) {
          sc.initial_velocity = Vec3(row[0], row[1], row[2]);
        } else if (key == "yaw" && row.size() == 1) {
          sc.initial_yaw = row[0];
        } else {
          fail(line, "unknown or malformed key '" + key + "' in [initial]");
        }
      } else {
        fail(line, "key = value not allowed in [" + section + "]");
      }
    }
  }

  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace quadmpc
