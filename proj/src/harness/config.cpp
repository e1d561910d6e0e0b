#include "adazero/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>

#include "adazero/envs/grid_config.hpp"

namespace adazero::harness {

namespace pt = boost::property_tree;

const char* to_string(Variant v) {
  switch (v) {
    case Variant::AdaZero: return "adazero";
    case Variant::NoAdaptive: return "no_adaptive";
    case Variant::NoIntrinsic: return "no_intrinsic";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  if (name == "adazero") return Variant::AdaZero;
  if (name == "no_adaptive") return Variant::NoAdaptive;
  if (name == "no_intrinsic") return Variant::NoIntrinsic;
  throw std::invalid_argument("unknown variant '" + name + "' (expected adazero, no_adaptive or no_intrinsic)");
}

std::vector<intrinsic::ConvSpec> parse_convs(const std::string& text) {
  std::vector<intrinsic::ConvSpec> convs;
  if (text == "none") return convs;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    intrinsic::ConvSpec c;
    char a = 0;
    char b = 0;
    std::istringstream t(token);
    if (!(t >> c.channels >> a >> c.kernel >> b >> c.stride) || a != ':' || b != ':' || !(t >> std::ws).eof() ||
        c.channels <= 0 || c.kernel <= 0 || c.stride <= 0) {
      throw std::invalid_argument("bad conv layer '" + token + "' (expected channels:kernel:stride)");
    }
    convs.push_back(c);
  }
  return convs;
}

std::string format_convs(const std::vector<intrinsic::ConvSpec>& convs) {
  if (convs.empty()) return "none";
  std::string out;
  for (const auto& c : convs) {
    if (!out.empty()) out += ' ';
    out += std::to_string(c.channels) + ":" + std::to_string(c.kernel) + ":" + std::to_string(c.stride);
  }
  return out;
}

RunConfig default_run_config(const std::string& env) {
  RunConfig config;
  config.env = env;
  config.grid = envs::preset_grid(env);
  const auto arch = intrinsic::default_arch_for(nn::Shape{config.grid.height, config.grid.width, 1});
  config.policy_arch = arch;
  config.ae_arch = arch;
  config.ev_arch = arch;
  config.total_steps = env == "four_rooms" ? 500000 : 50000;
  return config;
}

void RunConfig::validate() const {
  if (total_steps < 1) throw std::invalid_argument("total_steps must be at least 1");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (checkpoint_every < 0) throw std::invalid_argument("checkpoint_every must be >= 0");
  if (!(ppo.gamma >= 0.0 && ppo.gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (!(ppo.lambda >= 0.0 && ppo.lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (!(ppo.clip > 0.0)) throw std::invalid_argument("clip must be positive");
  if (ppo.epochs < 1 || ppo.minibatch < 1 || ppo.horizon < 1) {
    throw std::invalid_argument("epochs, minibatch and horizon must be positive");
  }
  if (ae_steps_per_update < 0 || ae_batch < 1) throw std::invalid_argument("bad autoencoder schedule");
  if (stop_at_success_rate < 0.0 || stop_at_success_rate > 1.0) {
    throw std::invalid_argument("stop_at_success_rate must lie in [0, 1]");
  }
  for (const auto* lr : {&policy_adam.learning_rate, &ae_adam.learning_rate, &ev_adam.learning_rate}) {
    if (!(*lr >= 0.0)) throw std::invalid_argument("learning rates must be non-negative");
  }
  grid.validate();
}

namespace {

using Section = pt::ptree;

void check_keys(const Section& section, const std::string& name, const std::set<std::string>& known) {
  for (const auto& [key, _] : section) {
    if (!known.contains(key)) throw std::invalid_argument("unknown [" + name + "] key '" + key + "'");
  }
}

template <typename T>
void read(const Section& s, const std::string& key, T& into) {
  if (auto v = s.get_optional<std::string>(key)) {
    std::istringstream in(*v);
    T value{};
    if (!(in >> value) || !(in >> std::ws).eof()) {
      throw std::invalid_argument("cannot parse '" + key + " = " + *v + "'");
    }
    into = value;
  }
}

void read_bool(const Section& s, const std::string& key, bool& into) {
  if (auto v = s.get_optional<std::string>(key)) {
    if (*v == "true" || *v == "1" || *v == "yes") {
      into = true;
    } else if (*v == "false" || *v == "0" || *v == "no") {
      into = false;
    } else {
      throw std::invalid_argument("cannot parse '" + key + " = " + *v + "' as a boolean");
    }
  }
}

void read_double(const Section& s, const std::string& key, double& into) {
  if (auto v = s.get_optional<std::string>(key)) {
    if (*v == "inf" || *v == "infinity") {
      into = std::numeric_limits<double>::infinity();
      return;
    }
    read(s, key, into);
  }
}

void read_arch(const Section& s, intrinsic::EncoderArch& arch) {
  if (auto v = s.get_optional<std::string>("convs")) arch.convs = parse_convs(*v);
  read(s, "hidden", arch.hidden);
}

const Section kEmpty;

const Section& child(const pt::ptree& tree, const std::string& name) {
  const auto c = tree.get_child_optional(name);
  return c ? *c : kEmpty;
}

}  // namespace

RunConfig parse_run_config(const std::string& ini_text) {
  pt::ptree tree;
  std::istringstream in(ini_text);
  pt::ini_parser::read_ini(in, tree);
  static const std::set<std::string> sections{"run", "grid", "ppo", "policy", "autoencoder", "evaluator"};
  for (const auto& [name, _] : tree) {
    if (!sections.contains(name)) throw std::invalid_argument("unknown config section [" + name + "]");
  }

  const Section& run = child(tree, "run");
  check_keys(run, "run",
             {"env", "variant", "total_steps", "seeds", "output_dir", "checkpoint_every", "log_rewards",
              "normalize_intrinsic", "stop_at_success_rate"});
  RunConfig config = default_run_config(run.get<std::string>("env", "dark_chamber"));
  if (auto v = run.get_optional<std::string>("variant")) config.variant = parse_variant(*v);
  read(run, "total_steps", config.total_steps);
  if (auto v = run.get_optional<std::string>("seeds")) {
    config.seeds.clear();
    std::istringstream seeds(*v);
    std::string token;
    while (seeds >> token) {
      std::size_t used = 0;
      const unsigned long long s = std::stoull(token, &used);
      if (used != token.size()) throw std::invalid_argument("bad seed '" + token + "'");
      config.seeds.push_back(s);
    }
  }
  if (auto v = run.get_optional<std::string>("output_dir")) config.output_dir = *v;
  read(run, "checkpoint_every", config.checkpoint_every);
  read_bool(run, "log_rewards", config.log_rewards);
  read_bool(run, "normalize_intrinsic", config.normalize_intrinsic);
  read(run, "stop_at_success_rate", config.stop_at_success_rate);

  if (const auto grid = tree.get_child_optional("grid")) {
    config.grid = envs::apply_grid_section(config.grid, *grid);
    const auto arch = intrinsic::default_arch_for(nn::Shape{config.grid.height, config.grid.width, 1});
    config.policy_arch = config.ae_arch = config.ev_arch = arch;
  }

  const Section& ppo = child(tree, "ppo");
  check_keys(ppo, "ppo",
             {"gamma", "lambda", "clip", "epochs", "minibatch", "horizon", "value_coef", "entropy_coef",
              "max_grad_norm", "normalize_advantages"});
  read(ppo, "gamma", config.ppo.gamma);
  read(ppo, "lambda", config.ppo.lambda);
  read_double(ppo, "clip", config.ppo.clip);
  read(ppo, "epochs", config.ppo.epochs);
  read(ppo, "minibatch", config.ppo.minibatch);
  read(ppo, "horizon", config.ppo.horizon);
  read(ppo, "value_coef", config.ppo.value_coef);
  read(ppo, "entropy_coef", config.ppo.entropy_coef);
  read(ppo, "max_grad_norm", config.ppo.max_grad_norm);
  read_bool(ppo, "normalize_advantages", config.ppo.normalize_advantages);

  const Section& pol = child(tree, "policy");
  check_keys(pol, "policy", {"learning_rate", "convs", "hidden"});
  read(pol, "learning_rate", config.policy_adam.learning_rate);
  read_arch(pol, config.policy_arch);

  const Section& ae = child(tree, "autoencoder");
  check_keys(ae, "autoencoder", {"learning_rate", "convs", "hidden", "steps_per_update", "batch_size"});
  read(ae, "learning_rate", config.ae_adam.learning_rate);
  read_arch(ae, config.ae_arch);
  read(ae, "steps_per_update", config.ae_steps_per_update);
  read(ae, "batch_size", config.ae_batch);

  const Section& ev = child(tree, "evaluator");
  check_keys(ev, "evaluator", {"learning_rate", "convs", "hidden"});
  read(ev, "learning_rate", config.ev_adam.learning_rate);
  read_arch(ev, config.ev_arch);

  config.validate();
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

namespace {

std::string layout_of(const envs::GridSpec& spec) {
  std::string out;
  for (int r = 0; r < spec.height; ++r) {
    if (r > 0) out += '/';
    for (int c = 0; c < spec.width; ++c) {
      const envs::Cell cell{r, c};
      if (spec.is_wall(cell)) {
        out += '#';
      } else if (cell == spec.start) {
        out += 'S';
      } else if (spec.goal && cell == *spec.goal) {
        out += 'G';
      } else {
        out += '.';
      }
    }
  }
  return out;
}

std::string num(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

std::string config_echo(const RunConfig& c) {
  std::ostringstream out;
  out << "[run]\n"
      << "env = " << c.env << "\n"
      << "variant = " << to_string(c.variant) << "\n"
      << "total_steps = " << c.total_steps << "\n"
      << "seeds =";
  for (auto s : c.seeds) out << ' ' << s;
  out << "\n"
      << "output_dir = " << c.output_dir.string() << "\n"
      << "checkpoint_every = " << c.checkpoint_every << "\n"
      << "log_rewards = " << (c.log_rewards ? "true" : "false") << "\n"
      << "normalize_intrinsic = " << (c.normalize_intrinsic ? "true" : "false") << "\n"
      << "stop_at_success_rate = " << num(c.stop_at_success_rate) << "\n\n"
      << "[grid]\n"
      << "layout = " << layout_of(c.grid) << "\n"
      << "goal_reward = " << num(c.grid.goal_reward) << "\n"
      << "max_episode_steps = " << c.grid.max_episode_steps << "\n\n"
      << "[ppo]\n"
      << "gamma = " << num(c.ppo.gamma) << "\n"
      << "lambda = " << num(c.ppo.lambda) << "\n"
      << "clip = " << num(c.ppo.clip) << "\n"
      << "epochs = " << c.ppo.epochs << "\n"
      << "minibatch = " << c.ppo.minibatch << "\n"
      << "horizon = " << c.ppo.horizon << "\n"
      << "value_coef = " << num(c.ppo.value_coef) << "\n"
      << "entropy_coef = " << num(c.ppo.entropy_coef) << "\n"
      << "max_grad_norm = " << num(c.ppo.max_grad_norm) << "\n"
      << "normalize_advantages = " << (c.ppo.normalize_advantages ? "true" : "false") << "\n\n"
      << "[policy]\n"
      << "learning_rate = " << num(c.policy_adam.learning_rate) << "\n"
      << "convs = " << format_convs(c.policy_arch.convs) << "\n"
      << "hidden = " << c.policy_arch.hidden << "\n\n"
      << "[autoencoder]\n"
      << "learning_rate = " << num(c.ae_adam.learning_rate) << "\n"
      << "convs = " << format_convs(c.ae_arch.convs) << "\n"
      << "hidden = " << c.ae_arch.hidden << "\n"
      << "steps_per_update = " << c.ae_steps_per_update << "\n"
      << "batch_size = " << c.ae_batch << "\n\n"
      << "[evaluator]\n"
      << "learning_rate = " << num(c.ev_adam.learning_rate) << "\n"
      << "convs = " << format_convs(c.ev_arch.convs) << "\n"
      << "hidden = " << c.ev_arch.hidden << "\n";
  return out.str();
}

}  // namespace adazero::harness
