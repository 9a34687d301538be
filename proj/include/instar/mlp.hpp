#pragma once

#include <string>
#include <vector>

#include "instar/builtins.hpp"
#include "instar/rule.hpp"

namespace instar {

enum class Activation { step, relu, sigmoid };

const char* activation_name(Activation a);

/// Exact activation functions. step is 1 when x > 0 and 0 otherwise; relu
/// clamps at 0; sigmoid is a fixed piecewise-linear rational approximation of
/// the logistic on integer knots in [-6, 6] (0 below, 1 above).
Rational activate(Activation a, const Rational& x);

struct Neuron {
  std::vector<Rational> weights;
  Rational bias;
};

/// Network description: layer_sizes[0] is the input count, layers[k-1][j-1]
/// is neuron j of layer k and carries layer_sizes[k-1] weights.
struct MlpSpec {
  std::vector<int> layer_sizes;
  Activation activation = Activation::step;
  std::vector<std::vector<Neuron>> layers;

  void validate() const;  // throws Error(spec_invariant)
  static MlpSpec from_json_text(const std::string& text);
  std::string to_json_text() const;
};

/// Slot label l(layer, index); inputs use layer 0.
Term slot_label(int layer, int index);

/// Compiles the network into rules: layer 1 as on-rules over input events
/// i(X, l(0,j)), deeper layers as if-rules over o(_, l(k-1,j)) facts, each
/// neuron computing through the calculate builtin. One macro step evaluates
/// the whole network.
RuleBase gen_mlp_program(const MlpSpec& spec);

/// Registers calculate(NeuronId, X1, ..., Xn, Y) for every neuron of the
/// network, with NeuronId = n(layer, index).
void register_calculate(BuiltinRegistry& registry, MlpSpec spec);

}  // namespace instar
