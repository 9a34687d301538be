#include "instar/mlp.hpp"

#include <json.hpp>
#include <memory>

#include "instar/constraints.hpp"
#include "instar/error.hpp"

namespace instar {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::step: return "step";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
  }
  return "step";
}

namespace {

// Logistic samples on integer knots, in thousandths, ends pinned to 0 and 1.
const long kSigmoidKnots[13] = {0,   7,   18,  47,  119, 269, 500,
                                731, 881, 953, 982, 993, 1000};

Integer floor_of(const Rational& x) {
  Integer q = numerator(x) / denominator(x);
  if (x < 0 && q * denominator(x) != numerator(x)) --q;
  return q;
}

Rational sigmoid_approx(const Rational& x) {
  if (x <= -6) return Rational(0);
  if (x >= 6) return Rational(1);
  Integer lo = floor_of(x);
  long idx = static_cast<long>(lo) + 6;
  Rational v0 = Rational(kSigmoidKnots[idx], 1000);
  Rational v1 = Rational(kSigmoidKnots[idx + 1], 1000);
  return v0 + (v1 - v0) * (x - Rational(lo));
}

}  // namespace

Rational activate(Activation a, const Rational& x) {
  switch (a) {
    case Activation::step: return x > 0 ? Rational(1) : Rational(0);
    case Activation::relu: return x > 0 ? x : Rational(0);
    case Activation::sigmoid: return sigmoid_approx(x);
  }
  return Rational(0);
}

void MlpSpec::validate() const {
  if (layer_sizes.size() < 2)
    throw Error(ErrorKind::spec_invariant,
                "need an input size and at least one layer");
  for (int n : layer_sizes)
    if (n <= 0) throw Error(ErrorKind::spec_invariant, "layer sizes must be positive");
  if (layers.size() != layer_sizes.size() - 1)
    throw Error(ErrorKind::spec_invariant, "weights must cover every layer");
  for (size_t k = 0; k < layers.size(); ++k) {
    if (layers[k].size() != static_cast<size_t>(layer_sizes[k + 1]))
      throw Error(ErrorKind::spec_invariant,
                  "layer " + std::to_string(k + 1) + " neuron count mismatch");
    for (const auto& neuron : layers[k]) {
      if (neuron.weights.size() != static_cast<size_t>(layer_sizes[k]))
        throw Error(ErrorKind::spec_invariant,
                    "weight vector length mismatch in layer " + std::to_string(k + 1));
    }
  }
}

namespace {

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    auto r = parse_rational(j.get<std::string>());
    if (r) return *r;
  }
  throw Error(ErrorKind::spec_invariant,
              "weights must be integers or rational strings, got " + j.dump());
}

Activation activation_from_name(const std::string& name) {
  if (name == "step") return Activation::step;
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  throw Error(ErrorKind::spec_invariant, "unknown activation '" + name + "'");
}

}  // namespace

MlpSpec MlpSpec::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorKind::spec_invariant, "network spec is not valid JSON");
  MlpSpec spec;
  try {
    spec.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    spec.activation = activation_from_name(j.at("activation").get<std::string>());
    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    for (size_t k = 0; k < weights.size(); ++k) {
      std::vector<Neuron> layer;
      for (size_t n = 0; n < weights[k].size(); ++n) {
        Neuron neuron;
        for (const auto& w : weights[k][n]) neuron.weights.push_back(rational_from_json(w));
        neuron.bias = rational_from_json(biases.at(k).at(n));
        layer.push_back(std::move(neuron));
      }
      spec.layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::spec_invariant, std::string("bad network spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::string MlpSpec::to_json_text() const {
  nlohmann::json j;
  j["layer_sizes"] = layer_sizes;
  j["activation"] = activation_name(activation);
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (const auto& layer : layers) {
    nlohmann::json lw = nlohmann::json::array();
    nlohmann::json lb = nlohmann::json::array();
    for (const auto& neuron : layer) {
      nlohmann::json nw = nlohmann::json::array();
      for (const auto& w : neuron.weights) nw.push_back(rational_text(w));
      lw.push_back(std::move(nw));
      lb.push_back(rational_text(neuron.bias));
    }
    weights.push_back(std::move(lw));
    biases.push_back(std::move(lb));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  return j.dump(2);
}

Term slot_label(int layer, int index) {
  return Term::fn("l", {Term::num(layer), Term::num(index)});
}

namespace {

Term neuron_id(int layer, int index) {
  return Term::fn("n", {Term::num(layer), Term::num(index)});
}

AtomicFormula rule_id(int layer, int index) {
  return AtomicFormula{"mlp", {Term::num(layer), Term::num(index)}};
}

std::vector<Term> input_vars(int count) {
  std::vector<Term> vars;
  for (int i = 1; i <= count; ++i) vars.push_back(Term::var("X" + std::to_string(i)));
  return vars;
}

}  // namespace

RuleBase gen_mlp_program(const MlpSpec& spec) {
  spec.validate();
  RuleBase rb;
  const Term out_var = Term::var("Y");

  for (size_t k = 1; k < spec.layer_sizes.size(); ++k) {
    const int fan_in = spec.layer_sizes[k - 1];
    for (int j = 1; j <= spec.layer_sizes[k]; ++j) {
      std::vector<Term> vars = input_vars(fan_in);
      std::vector<Term> call_args;
      call_args.push_back(neuron_id(static_cast<int>(k), j));
      call_args.insert(call_args.end(), vars.begin(), vars.end());
      call_args.push_back(out_var);
      Condition calc = Condition::builtin_of("calculate", std::move(call_args));

      Rule rule;
      rule.actions = {Action::add_fact(ConstrainedFormula{
          AtomicFormula{"o", {out_var, slot_label(static_cast<int>(k), j)}}, {}})};
      if (k == 1) {
        rule.kind = Rule::Kind::eca;
        for (int i = 1; i <= fan_in; ++i)
          rule.events.push_back(AtomicFormula{"i", {vars[i - 1], slot_label(0, i)}});
        rule.condition = std::move(calc);
      } else {
        rule.kind = Rule::Kind::if_then;
        Condition cond = Condition::fact_of(ConstrainedFormula{
            AtomicFormula{"o", {vars[0], slot_label(static_cast<int>(k) - 1, 1)}}, {}});
        for (int i = 2; i <= fan_in; ++i) {
          cond = Condition::conj(
              std::move(cond),
              Condition::fact_of(ConstrainedFormula{
                  AtomicFormula{"o", {vars[i - 1], slot_label(static_cast<int>(k) - 1, i)}},
                  {}}));
        }
        rule.condition = Condition::conj(std::move(cond), std::move(calc));
      }
      rb.rules.push_back(RuleEntry{rule_id(static_cast<int>(k), j), std::move(rule)});
    }
  }
  return rb;
}

void register_calculate(BuiltinRegistry& registry, MlpSpec spec) {
  spec.validate();
  auto table = std::make_shared<const MlpSpec>(std::move(spec));
  registry.add("calculate", [table](const std::vector<Term>& args)
                   -> std::optional<Substitution> {
    if (args.size() < 3)
      throw Error(ErrorKind::arity_mismatch, "calculate needs (NeuronId, Inputs..., Out)");
    const Term& id = args[0];
    if (!(id.is_fn() && id.name() == "n" && id.args().size() == 2 && id.ground()))
      throw Error(ErrorKind::unknown_neuron, id.str());
    Rational layer_r = eval_term(id.args()[0]);
    Rational index_r = eval_term(id.args()[1]);
    if (denominator(layer_r) != 1 || denominator(index_r) != 1)
      throw Error(ErrorKind::unknown_neuron, id.str());
    long layer = static_cast<long>(numerator(layer_r));
    long index = static_cast<long>(numerator(index_r));
    if (layer < 1 || static_cast<size_t>(layer) > table->layers.size())
      throw Error(ErrorKind::unknown_neuron, id.str());
    const auto& neurons = table->layers[static_cast<size_t>(layer - 1)];
    if (index < 1 || static_cast<size_t>(index) > neurons.size())
      throw Error(ErrorKind::unknown_neuron, id.str());
    const Neuron& neuron = neurons[static_cast<size_t>(index - 1)];

    if (args.size() != neuron.weights.size() + 2)
      throw Error(ErrorKind::arity_mismatch,
                  id.str() + " takes " + std::to_string(neuron.weights.size()) +
                      " inputs, got " + std::to_string(args.size() - 2));
    Rational sum = neuron.bias;
    for (size_t i = 0; i < neuron.weights.size(); ++i) {
      const Term& input = args[i + 1];
      if (!input.ground())
        throw Error(ErrorKind::non_ground_builtin_input, input.str());
      sum += neuron.weights[i] * eval_term(input);
    }
    Rational value = activate(table->activation, sum);

    const Term& out = args.back();
    if (out.is_var()) {
      Substitution sigma;
      sigma.bind(out.name(), Term::num(value));
      return sigma;
    }
    if (out.is_num() && out.value() == value) return Substitution{};
    return std::nullopt;
  });
}

}  // namespace instar
