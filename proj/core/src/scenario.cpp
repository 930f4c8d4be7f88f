// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "duplexforge/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "duplexforge/random.hpp"
#include "duplexforge/units.hpp"

namespace duplexforge {

namespace {

// Thrown by value parsers; converted into a ScenarioIssue for the offending line.
struct BadValue {
  std::string message;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& text, bool allow_inf = false) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf" || t == "-inf") {
    if (!allow_inf) throw BadValue{"infinite value not allowed here"};
    return t == "-inf" ? kNegInf : -kNegInf;
  }
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw BadValue{"'" + t + "' is not a number"};
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw BadValue{"'" + t + "' is not a non-negative integer"};
  }
  return v;
}

std::size_t parse_size(const std::string& text) { return static_cast<std::size_t>(parse_u64(text)); }

std::vector<double> parse_list(const std::string& text, bool allow_inf = false) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_double(text.substr(start, comma - start), allow_inf));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <std::size_t N>
std::array<double, N> parse_fixed(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != N) {
    throw BadValue{"expected " + std::to_string(N) + " comma-separated numbers, got " +
                   std::to_string(v.size())};
  }
  std::array<double, N> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true") return true;
  if (t == "false") return false;
  throw BadValue{"expected true or false, got '" + t + "'"};
}

std::string parse_string(const std::string& text) {
  std::string t = trim(text);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
  return t;
}

SiModelChoice parse_si_model(const std::string& text) {
  const std::string t = trim(text);
  if (t == "spherical_wave") return SiModelChoice::spherical_wave;
  if (t == "rayleigh") return SiModelChoice::rayleigh;
  if (t == "identity") return SiModelChoice::identity;
  if (t == "zero") return SiModelChoice::zero;
  throw BadValue{"unknown SI model '" + t + "' (spherical_wave, rayleigh, identity, zero)"};
}

SteerBase parse_steer_base(const std::string& text) {
  const std::string t = trim(text);
  if (t == "fd_link") return SteerBase::fd_link;
  if (t == "flat") return SteerBase::flat;
  throw BadValue{"unknown steer base '" + t + "' (fd_link, flat)"};
}

const char* to_text(SiModelChoice m) {
  switch (m) {
    case SiModelChoice::spherical_wave: return "spherical_wave";
    case SiModelChoice::rayleigh: return "rayleigh";
    case SiModelChoice::identity: return "identity";
    case SiModelChoice::zero: return "zero";
  }
  return "?";
}

const char* to_text(SteerBase b) { return b == SteerBase::flat ? "flat" : "fd_link"; }

std::string num(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Range>
std::string num_list(const Range& r) {
  std::string out;
  for (double v : r) {
    if (!out.empty()) out += ", ";
    out += num(v);
  }
  return out;
}

using Setter = std::function<void(Scenario&, const std::string&)>;

// Optional blocks are created on first use of any of their keys.
RegionConfig& region(Scenario& s) { return s.region ? *s.region : s.region.emplace(); }
SicConfig& sic(Scenario& s) { return s.sic ? *s.sic : s.sic.emplace(); }
CodebookConfig& codebook(Scenario& s) { return s.codebook ? *s.codebook : s.codebook.emplace(); }
SteerConfig& steer(Scenario& s) { return s.steer ? *s.steer : s.steer.emplace(); }

template <typename Block>
Setter enable(std::optional<Block> Scenario::*member) {
  return [member](Scenario& s, const std::string& v) {
    if (parse_bool(v)) {
      if (!(s.*member)) (s.*member).emplace();
    } else {
      (s.*member).reset();
    }
  };
}

void add_array_keys(std::map<std::string, Setter>& t, const std::string& side,
                    ArrayConfig Scenario::*member) {
  t["arrays." + side + ".n_elements"] = [member](Scenario& s, const std::string& v) {
    (s.*member).n_elements = parse_size(v);
  };
  t["arrays." + side + ".rows"] = [member](Scenario& s, const std::string& v) {
    (s.*member).rows = parse_size(v);
  };
  t["arrays." + side + ".spacing"] = [member](Scenario& s, const std::string& v) {
    (s.*member).spacing = parse_double(v);
  };
}

void add_codebook_side_keys(std::map<std::string, Setter>& t, const std::string& side,
                            CodebookSideConfig CodebookConfig::*member) {
  const std::string p = "codebook." + side + ".";
  t[p + "n_elements"] = [member](Scenario& s, const std::string& v) {
    (codebook(s).*member).n_elements = parse_size(v);
  };
  t[p + "n_beams"] = [member](Scenario& s, const std::string& v) {
    (codebook(s).*member).n_beams = parse_size(v);
  };
  t[p + "span_deg"] = [member](Scenario& s, const std::string& v) {
    (codebook(s).*member).span_deg = parse_fixed<2>(v);
  };
  t[p + "elevation_deg"] = [member](Scenario& s, const std::string& v) {
    (codebook(s).*member).elevation_deg = parse_double(v);
  };
}

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["name"] = [](Scenario& s, const std::string& v) { s.name = parse_string(v); };
    t["seed"] = [](Scenario& s, const std::string& v) { s.master_seed = parse_u64(v); };

    add_array_keys(t, "tx", &Scenario::tx_array);
    add_array_keys(t, "rx", &Scenario::rx_array);
    t["arrays.pose.translation"] = [](Scenario& s, const std::string& v) {
      s.pose.translation = parse_fixed<3>(v);
    };
    t["arrays.pose.rotation_deg"] = [](Scenario& s, const std::string& v) {
      s.pose.rotation_deg = parse_fixed<3>(v);
    };

    t["channel.si.model"] = [](Scenario& s, const std::string& v) { s.si.model = parse_si_model(v); };
    t["channel.si.rho"] = [](Scenario& s, const std::string& v) { s.si.rho = parse_double(v); };
    t["channel.si.gain_db"] = [](Scenario& s, const std::string& v) {
      s.si.gain_db = parse_double(v, true);
    };
    t["channel.users.tx_direction"] = [](Scenario& s, const std::string& v) {
      s.users.tx_direction = parse_fixed<2>(v);
    };
    t["channel.users.rx_direction"] = [](Scenario& s, const std::string& v) {
      s.users.rx_direction = parse_fixed<2>(v);
    };
    t["channel.users.tx_gain_db"] = [](Scenario& s, const std::string& v) {
      s.users.tx_gain_db = parse_double(v);
    };
    t["channel.users.rx_gain_db"] = [](Scenario& s, const std::string& v) {
      s.users.rx_gain_db = parse_double(v);
    };
    t["channel.cross_link.gain_db"] = [](Scenario& s, const std::string& v) {
      s.users.cross_link_gain_db = parse_double(v, true);
    };

    t["budget.p_bs_dbm"] = [](Scenario& s, const std::string& v) { s.powers.p_bs_dbm = parse_double(v); };
    t["budget.p_ue_dbm"] = [](Scenario& s, const std::string& v) { s.powers.p_ue_dbm = parse_double(v); };
    t["budget.n_bs_dbm"] = [](Scenario& s, const std::string& v) { s.powers.n_bs_dbm = parse_double(v); };
    t["budget.n_ue_dbm"] = [](Scenario& s, const std::string& v) { s.powers.n_ue_dbm = parse_double(v); };

    t["phase_shifter.phase_bits"] = [](Scenario& s, const std::string& v) {
      s.phase_shifter.phase_bits = static_cast<int>(parse_size(v));
    };
    t["phase_shifter.amplitude_bits"] = [](Scenario& s, const std::string& v) {
      s.phase_shifter.amplitude_bits = static_cast<int>(parse_size(v));
    };
    t["phase_shifter.amplitude_levels_db"] = [](Scenario& s, const std::string& v) {
      s.phase_shifter.amplitude_levels_db = parse_list(v);
    };

    t["region.enabled"] = enable(&Scenario::region);
    t["region.snr_tx_db"] = [](Scenario& s, const std::string& v) { region(s).snr_tx_db = parse_double(v); };
    t["region.snr_rx_db"] = [](Scenario& s, const std::string& v) { region(s).snr_rx_db = parse_double(v); };
    t["region.n_points"] = [](Scenario& s, const std::string& v) { region(s).n_points = parse_size(v); };
    t["region.inr_tx_db"] = [](Scenario& s, const std::string& v) {
      region(s).inr_tx_db = parse_list(v, true);
    };
    t["region.inr_rx_db"] = [](Scenario& s, const std::string& v) {
      region(s).inr_rx_db = parse_list(v, true);
    };

    t["sic.enabled"] = enable(&Scenario::sic);
    t["sic.n_taps"] = [](Scenario& s, const std::string& v) { sic(s).n_taps = parse_size(v); };
    t["sic.tap_delay_samples"] = [](Scenario& s, const std::string& v) {
      sic(s).tap_delay_samples = parse_double(v);
    };
    t["sic.samples"] = [](Scenario& s, const std::string& v) { sic(s).samples = parse_size(v); };
    t["sic.channel_taps"] = [](Scenario& s, const std::string& v) { sic(s).channel_taps = parse_size(v); };
    t["sic.channel_decay_db"] = [](Scenario& s, const std::string& v) {
      sic(s).channel_decay_db = parse_double(v);
    };
    t["sic.noise_db"] = [](Scenario& s, const std::string& v) { sic(s).noise_db = parse_double(v, true); };

    t["codebook.enabled"] = enable(&Scenario::codebook);
    add_codebook_side_keys(t, "tx", &CodebookConfig::tx);
    add_codebook_side_keys(t, "rx", &CodebookConfig::rx);
    t["codebook.sigma2_tx"] = [](Scenario& s, const std::string& v) { codebook(s).sigma2_tx = parse_double(v); };
    t["codebook.sigma2_rx"] = [](Scenario& s, const std::string& v) { codebook(s).sigma2_rx = parse_double(v); };
    t["codebook.max_iters"] = [](Scenario& s, const std::string& v) { codebook(s).max_iters = parse_size(v); };
    t["codebook.tolerance"] = [](Scenario& s, const std::string& v) { codebook(s).tolerance = parse_double(v); };

    t["steer.enabled"] = enable(&Scenario::steer);
    t["steer.delta_theta_deg"] = [](Scenario& s, const std::string& v) {
      steer(s).neighborhood.delta_theta_deg = parse_double(v);
    };
    t["steer.delta_phi_deg"] = [](Scenario& s, const std::string& v) {
      steer(s).neighborhood.delta_phi_deg = parse_double(v);
    };
    t["steer.res_theta_deg"] = [](Scenario& s, const std::string& v) {
      steer(s).neighborhood.res_theta_deg = parse_double(v);
    };
    t["steer.res_phi_deg"] = [](Scenario& s, const std::string& v) {
      steer(s).neighborhood.res_phi_deg = parse_double(v);
    };
    t["steer.target_inr_db"] = [](Scenario& s, const std::string& v) {
      steer(s).target_inr_db = parse_double(v, true);
    };
    t["steer.sigma_db"] = [](Scenario& s, const std::string& v) { steer(s).sigma_db = parse_double(v); };
    t["steer.trials"] = [](Scenario& s, const std::string& v) { steer(s).trials = parse_size(v); };
    t["steer.base"] = [](Scenario& s, const std::string& v) { steer(s).base = parse_steer_base(v); };
    t["steer.base_inr_db"] = [](Scenario& s, const std::string& v) { steer(s).base_inr_db = parse_double(v); };
    t["steer.azimuth_span_deg"] = [](Scenario& s, const std::string& v) {
      steer(s).azimuth_span_deg = parse_fixed<2>(v);
    };
    t["steer.elevation_span_deg"] = [](Scenario& s, const std::string& v) {
      steer(s).elevation_span_deg = parse_fixed<2>(v);
    };
    t["steer.map_file"] = [](Scenario& s, const std::string& v) { steer(s).map_file = parse_string(v); };
    t["steer.initial_tx_direction"] = [](Scenario& s, const std::string& v) {
      steer(s).initial_tx_direction = parse_fixed<2>(v);
    };
    t["steer.initial_rx_direction"] = [](Scenario& s, const std::string& v) {
      steer(s).initial_rx_direction = parse_fixed<2>(v);
    };
    return t;
  }();
  return table;
}

class Validator {
 public:
  std::vector<ScenarioIssue> issues;

  void check(bool ok, std::string path, std::string message) {
    if (!ok) issues.push_back({std::move(path), 0, std::move(message)});
  }

  void direction(const std::array<double, 2>& d, const std::string& path) {
    check(d[0] >= -180.0 && d[0] < 180.0, path, "azimuth must lie in [-180, 180)");
    check(d[1] >= -90.0 && d[1] <= 90.0, path, "elevation must lie in [-90, 90]");
  }

  void array(const ArrayConfig& a, const std::string& path) {
    check(a.n_elements >= 1, path + ".n_elements", "must be >= 1");
    check(a.rows >= 1, path + ".rows", "must be >= 1");
    if (a.rows >= 1) {
      check(a.n_elements % a.rows == 0, path + ".rows",
            "n_elements " + std::to_string(a.n_elements) + " is not divisible by rows " +
                std::to_string(a.rows));
    }
    check(a.spacing > 0.0, path + ".spacing", "must be > 0");
  }

  void run(const Scenario& s) {
    array(s.tx_array, "arrays.tx");
    array(s.rx_array, "arrays.rx");
    direction(s.users.tx_direction, "channel.users.tx_direction");
    direction(s.users.rx_direction, "channel.users.rx_direction");
    check(std::isfinite(s.si.rho) && s.si.rho > 0.0, "channel.si.rho", "must be > 0");
    check(s.si.gain_db < 1e300, "channel.si.gain_db", "must be finite or -inf");
    check(s.users.cross_link_gain_db < 1e300, "channel.cross_link.gain_db",
          "must be finite or -inf");
    check(s.phase_shifter.phase_bits <= 30, "phase_shifter.phase_bits", "must be <= 30");
    check(s.phase_shifter.amplitude_bits <= 30, "phase_shifter.amplitude_bits", "must be <= 30");
    for (double l : s.phase_shifter.amplitude_levels_db) {
      check(l >= 0.0, "phase_shifter.amplitude_levels_db", "attenuation levels must be >= 0 dB");
    }
    if (s.si.model == SiModelChoice::identity) {
      check(s.tx_array.n_elements == s.rx_array.n_elements, "channel.si.model",
            "identity SI needs equally sized arrays");
    }

    if (s.region) {
      const auto& r = *s.region;
      check(r.n_points >= 2, "region.n_points", "must be >= 2");
      check(r.inr_tx_db.size() == r.inr_rx_db.size(), "region",
            "inr_tx_db and inr_rx_db must have the same length");
      for (double v : r.inr_tx_db) check(v < 1e300, "region.inr_tx_db", "must be finite or -inf");
      for (double v : r.inr_rx_db) check(v < 1e300, "region.inr_rx_db", "must be finite or -inf");
    }
    if (s.sic) {
      const auto& c = *s.sic;
      check(c.n_taps >= 1, "sic.n_taps", "must be >= 1");
      check(c.channel_taps >= 1, "sic.channel_taps", "must be >= 1");
      check(c.tap_delay_samples > 0.0, "sic.tap_delay_samples", "must be > 0");
      check(c.samples >= 1, "sic.samples", "must be >= 1");
      check(c.noise_db < 1e300, "sic.noise_db", "must be finite or -inf");
      const double span = static_cast<double>(std::max(c.n_taps, c.channel_taps) - 1) *
                          c.tap_delay_samples;
      check(span < static_cast<double>(c.samples), "sic.samples",
            "tap span does not fit in the sample window");
    }
    if (s.codebook) {
      const auto& c = *s.codebook;
      for (const auto& [name, side, arr] :
           {std::tuple{"tx", &c.tx, &s.tx_array}, std::tuple{"rx", &c.rx, &s.rx_array}}) {
        const std::string path = std::string("codebook.") + name;
        if (side->n_elements) {
          check(*side->n_elements == arr->n_elements, path,
                "declares " + std::to_string(*side->n_elements) + " elements but arrays." + name +
                    " has " + std::to_string(arr->n_elements));
        }
        check(side->n_beams >= 1, path + ".n_beams", "must be >= 1");
        direction({side->span_deg[0], side->elevation_deg}, path + ".span_deg");
        direction({side->span_deg[1], side->elevation_deg}, path + ".span_deg");
      }
      check(c.sigma2_tx >= 0.0, "codebook.sigma2_tx", "must be >= 0");
      check(c.sigma2_rx >= 0.0, "codebook.sigma2_rx", "must be >= 0");
      check(c.max_iters >= 1, "codebook.max_iters", "must be >= 1");
      check(c.tolerance >= 0.0, "codebook.tolerance", "must be >= 0");
    }
    if (s.steer) {
      const auto& c = *s.steer;
      try {
        c.neighborhood.validate();
      } catch (const Error& e) {
        check(false, "steer", e.what());
      }
      check(c.sigma_db >= 0.0, "steer.sigma_db", "must be >= 0");
      check(c.trials >= 1, "steer.trials", "must be >= 1");
      check(c.target_inr_db < 1e300, "steer.target_inr_db", "must be finite or -inf");
      check(c.azimuth_span_deg[0] <= c.azimuth_span_deg[1], "steer.azimuth_span_deg",
            "must be ascending");
      check(c.elevation_span_deg[0] <= c.elevation_span_deg[1], "steer.elevation_span_deg",
            "must be ascending");
      direction({c.azimuth_span_deg[0], c.elevation_span_deg[0]}, "steer.azimuth_span_deg");
      direction({c.azimuth_span_deg[1], c.elevation_span_deg[1]}, "steer.elevation_span_deg");
      direction(c.initial_tx_direction, "steer.initial_tx_direction");
      direction(c.initial_rx_direction, "steer.initial_rx_direction");
    }
    check(!s.stochastic() || s.master_seed.has_value(), "seed",
          "scenario draws random numbers but no master seed is set");
  }
};

}  // namespace

bool Scenario::stochastic() const {
  return si.model == SiModelChoice::rayleigh || std::isfinite(users.cross_link_gain_db) ||
         sic.has_value() || (steer.has_value() && steer->map_file.empty());
}

ScenarioError::ScenarioError(std::vector<ScenarioIssue> issues)
    : ConfigError([&] {
        std::ostringstream msg;
        msg << "scenario has " << issues.size() << " problem" << (issues.size() == 1 ? "" : "s");
        for (const auto& i : issues) {
          msg << "\n  " << i.path;
          if (i.line) msg << " (line " << i.line << ")";
          msg << ": " << i.message;
        }
        return msg.str();
      }()),
      issues_(std::move(issues)) {}

Scenario load_scenario(std::string_view text, std::optional<std::uint64_t> seed_override) {
  Scenario s;
  std::vector<ScenarioIssue> issues;
  std::set<std::string> seen;
  const auto& table = schema();

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string line(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    // '#' starts a comment at the beginning of a line or after whitespace.
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (line[k] == '#' && (k == 0 || line[k - 1] == ' ' || line[k - 1] == '\t')) {
        line.resize(k);
        break;
      }
    }
    const std::string body = trim(line);
    if (body.empty()) continue;

    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      issues.push_back({"", line_no, "expected 'key = value', got '" + body + "'"});
      continue;
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end()) {
      issues.push_back({key, line_no, "unknown key '" + key + "'"});
      continue;
    }
    if (!seen.insert(key).second) {
      issues.push_back({key, line_no, "key set more than once"});
      continue;
    }
    if (value.empty()) {
      issues.push_back({key, line_no, "missing value"});
      continue;
    }
    try {
      it->second(s, value);
    } catch (const BadValue& e) {
      issues.push_back({key, line_no, e.message});
    }
  }

  if (seed_override) s.master_seed = seed_override;

  Validator v;
  v.run(s);
  issues.insert(issues.end(), v.issues.begin(), v.issues.end());
  if (!issues.empty()) throw ScenarioError(std::move(issues));
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  auto kv = [&](const std::string& k, const std::string& v) { out << k << " = " << v << '\n'; };
  if (!s.name.empty()) kv("name", "\"" + s.name + "\"");
  if (s.master_seed) kv("seed", std::to_string(*s.master_seed));
  for (const auto& [side, a] : {std::pair{"tx", &s.tx_array}, std::pair{"rx", &s.rx_array}}) {
    const std::string p = std::string("arrays.") + side + ".";
    kv(p + "n_elements", std::to_string(a->n_elements));
    kv(p + "rows", std::to_string(a->rows));
    kv(p + "spacing", num(a->spacing));
  }
  kv("arrays.pose.translation", num_list(s.pose.translation));
  kv("arrays.pose.rotation_deg", num_list(s.pose.rotation_deg));
  kv("channel.si.model", to_text(s.si.model));
  kv("channel.si.rho", num(s.si.rho));
  kv("channel.si.gain_db", num(s.si.gain_db));
  kv("channel.users.tx_direction", num_list(s.users.tx_direction));
  kv("channel.users.rx_direction", num_list(s.users.rx_direction));
  kv("channel.users.tx_gain_db", num(s.users.tx_gain_db));
  kv("channel.users.rx_gain_db", num(s.users.rx_gain_db));
  kv("channel.cross_link.gain_db", num(s.users.cross_link_gain_db));
  kv("budget.p_bs_dbm", num(s.powers.p_bs_dbm));
  kv("budget.p_ue_dbm", num(s.powers.p_ue_dbm));
  kv("budget.n_bs_dbm", num(s.powers.n_bs_dbm));
  kv("budget.n_ue_dbm", num(s.powers.n_ue_dbm));
  kv("phase_shifter.phase_bits", std::to_string(s.phase_shifter.phase_bits));
  kv("phase_shifter.amplitude_bits", std::to_string(s.phase_shifter.amplitude_bits));
  if (!s.phase_shifter.amplitude_levels_db.empty()) {
    kv("phase_shifter.amplitude_levels_db", num_list(s.phase_shifter.amplitude_levels_db));
  }
  if (s.region) {
    const auto& r = *s.region;
    kv("region.enabled", "true");
    kv("region.snr_tx_db", num(r.snr_tx_db));
    kv("region.snr_rx_db", num(r.snr_rx_db));
    kv("region.n_points", std::to_string(r.n_points));
    kv("region.inr_tx_db", num_list(r.inr_tx_db));
    kv("region.inr_rx_db", num_list(r.inr_rx_db));
  }
  if (s.sic) {
    const auto& c = *s.sic;
    kv("sic.enabled", "true");
    kv("sic.n_taps", std::to_string(c.n_taps));
    kv("sic.tap_delay_samples", num(c.tap_delay_samples));
    kv("sic.samples", std::to_string(c.samples));
    kv("sic.channel_taps", std::to_string(c.channel_taps));
    kv("sic.channel_decay_db", num(c.channel_decay_db));
    kv("sic.noise_db", num(c.noise_db));
  }
  if (s.codebook) {
    const auto& c = *s.codebook;
    kv("codebook.enabled", "true");
    for (const auto& [side, cs] : {std::pair{"tx", &c.tx}, std::pair{"rx", &c.rx}}) {
      const std::string p = std::string("codebook.") + side + ".";
      if (cs->n_elements) kv(p + "n_elements", std::to_string(*cs->n_elements));
      kv(p + "n_beams", std::to_string(cs->n_beams));
      kv(p + "span_deg", num_list(cs->span_deg));
      kv(p + "elevation_deg", num(cs->elevation_deg));
    }
    kv("codebook.sigma2_tx", num(c.sigma2_tx));
    kv("codebook.sigma2_rx", num(c.sigma2_rx));
    kv("codebook.max_iters", std::to_string(c.max_iters));
    kv("codebook.tolerance", num(c.tolerance));
  }
  if (s.steer) {
    const auto& c = *s.steer;
    kv("steer.enabled", "true");
    kv("steer.delta_theta_deg", num(c.neighborhood.delta_theta_deg));
    kv("steer.delta_phi_deg", num(c.neighborhood.delta_phi_deg));
    kv("steer.res_theta_deg", num(c.neighborhood.res_theta_deg));
    kv("steer.res_phi_deg", num(c.neighborhood.res_phi_deg));
    kv("steer.target_inr_db", num(c.target_inr_db));
    kv("steer.sigma_db", num(c.sigma_db));
    kv("steer.trials", std::to_string(c.trials));
    kv("steer.base", to_text(c.base));
    kv("steer.base_inr_db", num(c.base_inr_db));
    kv("steer.azimuth_span_deg", num_list(c.azimuth_span_deg));
    kv("steer.elevation_span_deg", num_list(c.elevation_span_deg));
    if (!c.map_file.empty()) kv("steer.map_file", "\"" + c.map_file + "\"");
    kv("steer.initial_tx_direction", num_list(c.initial_tx_direction));
    kv("steer.initial_rx_direction", num_list(c.initial_rx_direction));
  }
  return out.str();
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view label) {
  return mix64(mix64(master_seed) ^ fnv1a64(label));
}

ArrayGeometry make_geometry(const ArrayConfig& cfg) {
  return ArrayGeometry::uniform_planar(cfg.rows, cfg.n_elements / cfg.rows, cfg.spacing);
}

ArrayPose make_pose(const PoseConfig& cfg) {
  ArrayPose p;
  p.translation = Vec3(cfg.translation[0], cfg.translation[1], cfg.translation[2]);
  p.rotation =
      ArrayPose::rotation_from_euler_deg(cfg.rotation_deg[0], cfg.rotation_deg[1], cfg.rotation_deg[2]);
  return p;
}

Direction make_direction(const std::array<double, 2>& az_el) { return {az_el[0], az_el[1]}; }

SiChannel make_si_channel(const Scenario& s) {
  const auto n_tx = s.tx_array.n_elements;
  const auto n_rx = s.rx_array.n_elements;
  SiChannel si;
  switch (s.si.model) {
    case SiModelChoice::spherical_wave:
      si = spherical_wave_si_channel(make_geometry(s.tx_array), make_geometry(s.rx_array),
                                     make_pose(s.pose), s.si.rho);
      break;
    case SiModelChoice::rayleigh:
      si = rayleigh_si_channel(n_rx, n_tx, derive_seed(s.master_seed.value_or(0), "si"));
      break;
    case SiModelChoice::identity:
      si = custom_si_channel(CMatrix::Identity(static_cast<Eigen::Index>(n_rx),
                                               static_cast<Eigen::Index>(n_tx)));
      break;
    case SiModelChoice::zero:
      si = custom_si_channel(
          CMatrix::Zero(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_tx)));
      break;
  }
  if (s.si.gain_db != 0.0) si.matrix *= db_to_amplitude(s.si.gain_db);
  return si;
}

LinkContext make_link_context(const Scenario& s) {
  LinkContext ctx;
  ctx.h_tx = los_user_channel(make_geometry(s.tx_array), make_direction(s.users.tx_direction),
                              s.users.tx_gain_db);
  ctx.h_rx = los_user_channel(make_geometry(s.rx_array), make_direction(s.users.rx_direction),
                              s.users.rx_gain_db);
  ctx.h_cl = cross_link_channel(s.users.cross_link_gain_db,
                                derive_seed(s.master_seed.value_or(0), "cross-link"));
  ctx.si = make_si_channel(s);
  ctx.powers = s.powers;
  return ctx;
}

CoverageSpec make_coverage(const ArrayConfig& array, const CodebookSideConfig& side) {
  return {make_geometry(array),
          azimuth_sweep(side.span_deg[0], side.span_deg[1], side.n_beams, side.elevation_deg)};
}

}  // namespace duplexforge
