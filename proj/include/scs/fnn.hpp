#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "scs/dataset.hpp"

namespace scs {

enum class Activation { Sigmoid, Linear };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// Feed-forward regression network: one scalar output, any number of hidden
/// layers (the shipped models use exactly one). Hidden layers apply
/// `hidden_act` (logistic sigmoid by default), the output layer is linear.
struct Network {
    std::vector<int> layer_sizes;              ///< (n_in, hidden..., 1)
    std::vector<std::vector<double>> weights;  ///< per layer, row-major (out x in)
    std::vector<std::vector<double>> biases;   ///< per layer
    Activation hidden_act = Activation::Sigmoid;
    Activation output_act = Activation::Linear;
    std::uint64_t init_seed = 0;               ///< provenance (0 = not seeded)

    std::size_t parameter_count() const;
};

/// Parameter count for a layer-size list, without building a network.
std::size_t parameter_count(const std::vector<int>& layer_sizes);

/// Random network: weights drawn uniformly from [-1/sqrt(fan_in),
/// +1/sqrt(fan_in)] per layer, biases zero. Draw order: layer by layer,
/// weights row-major (biases consume no draws). Requires at least 2 layers,
/// all sizes >= 1, last size 1. Deterministic per seed.
Network init_network(const std::vector<int>& layer_sizes, std::uint64_t seed);

/// Scalar prediction for one input vector (length must equal the input
/// size). Hidden layers apply the configured activation, output is linear.
double forward(const Network& net, const std::vector<double>& x);

/// Predictions for every row of a feature matrix.
std::vector<double> forward_batch(const Network& net, const FeatureMatrix& m);

/// Mean squared error, sum((y - yhat)^2) / n. Lengths must match and be
/// >= 1.
double mse(const std::vector<double>& y, const std::vector<double>& yhat);

/// MSE of the network over a feature matrix.
double mse_of_network(const Network& net, const FeatureMatrix& m);

/// Analytic gradient of mse_of_network with respect to every parameter, in
/// codec order (see encode_weights). Batch must be non-empty.
std::vector<double> gradient(const Network& net, const FeatureMatrix& batch);

struct TrainConfig {
    double learning_rate = 0.05;
    int max_epochs = 2000;
    /// Stop once training MSE <= goal; values <= 0 other than exact 0 on a
    /// perfect fit never trigger (use a negative goal to disable).
    double goal = 1e-6;
    /// Consecutive epochs of validation loss above its best before stopping.
    int max_validation_failures = 50;
    std::uint64_t seed = 0;  ///< provenance echo; training itself draws nothing
};

struct TrainResult {
    Network net;                  ///< final network (best-validation snapshot on early stop)
    std::vector<double> history;  ///< training MSE after each epoch
    int epochs_run = 0;
    std::string stop_reason;      ///< "goal" | "max_epochs" | "validation"
};

/// Full-batch gradient descent. Stops at max epochs, at training MSE <=
/// goal, or when validation loss has exceeded its best for
/// max_validation_failures consecutive epochs (returning the snapshot taken
/// at the best validation loss). An empty validation set disables early
/// stopping. Deterministic.
TrainResult train_backprop(Network net, const FeatureMatrix& train_set,
                           const FeatureMatrix& val_set, const TrainConfig& cfg);

/// Flatten parameters: layer by layer, weights row-major, then that layer's
/// biases.
std::vector<double> encode_weights(const Network& net);

/// Rebuild a network from a flat vector. Throws std::invalid_argument
/// naming expected and actual length on mismatch.
Network decode_weights(const std::vector<int>& layer_sizes, const std::vector<double>& flat,
                       Activation hidden_act = Activation::Sigmoid,
                       Activation output_act = Activation::Linear);

nlohmann::json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);

} // namespace scs
