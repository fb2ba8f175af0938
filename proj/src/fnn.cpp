#include "scs/fnn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "scs/rng.hpp"

namespace scs {

std::string activation_name(Activation a) {
    switch (a) {
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Linear: return "linear";
    }
    throw std::invalid_argument("unknown activation");
}

Activation activation_from_name(const std::string& name) {
    if (name == "sigmoid") {
        return Activation::Sigmoid;
    }
    if (name == "linear") {
        return Activation::Linear;
    }
    throw std::invalid_argument("unknown activation '" + name + "'");
}

namespace {

/// Numerically stable logistic sigmoid.
double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double activate(double z, Activation a) {
    return a == Activation::Sigmoid ? sigmoid(z) : z;
}

void check_sizes(const std::vector<int>& sizes) {
    if (sizes.size() < 2) {
        throw std::invalid_argument("network needs at least input and output layers, got " +
                                    std::to_string(sizes.size()));
    }
    for (int s : sizes) {
        if (s < 1) {
            throw std::invalid_argument("layer sizes must be >= 1");
        }
    }
    if (sizes.back() != 1) {
        throw std::invalid_argument("output layer width must be 1, got " +
                                    std::to_string(sizes.back()));
    }
}

} // namespace

std::size_t parameter_count(const std::vector<int>& layer_sizes) {
    std::size_t count = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const auto in = static_cast<std::size_t>(layer_sizes[l]);
        const auto out = static_cast<std::size_t>(layer_sizes[l + 1]);
        count += out * in + out;
    }
    return count;
}

std::size_t Network::parameter_count() const { return scs::parameter_count(layer_sizes); }

Network init_network(const std::vector<int>& layer_sizes, std::uint64_t seed) {
    check_sizes(layer_sizes);
    Network net;
    net.layer_sizes = layer_sizes;
    net.init_seed = seed;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const auto in = static_cast<std::size_t>(layer_sizes[l]);
        const auto out = static_cast<std::size_t>(layer_sizes[l + 1]);
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        std::vector<double> w(out * in);
        for (double& v : w) {
            v = rng.uniform(-bound, bound);
        }
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(out, 0.0);
    }
    return net;
}

namespace {

/// One forward pass; when `keep` is non-null, stores the activations of
/// every layer (input first) for backpropagation.
double forward_impl(const Network& net, const double* x, std::size_t n,
                    std::vector<std::vector<double>>* keep) {
    if (n != static_cast<std::size_t>(net.layer_sizes.front())) {
        throw std::invalid_argument("input has " + std::to_string(n) + " entries, network expects " +
                                    std::to_string(net.layer_sizes.front()));
    }
    std::vector<double> a(x, x + n);
    if (keep != nullptr) {
        keep->clear();
        keep->push_back(a);
    }
    const std::size_t layers = net.weights.size();
    for (std::size_t l = 0; l < layers; ++l) {
        const auto in = static_cast<std::size_t>(net.layer_sizes[l]);
        const auto out = static_cast<std::size_t>(net.layer_sizes[l + 1]);
        const Activation act = (l + 1 == layers) ? net.output_act : net.hidden_act;
        std::vector<double> next(out);
        const auto& w = net.weights[l];
        const auto& b = net.biases[l];
        for (std::size_t j = 0; j < out; ++j) {
            double z = b[j];
            const double* row = w.data() + j * in;
            for (std::size_t i = 0; i < in; ++i) {
                z += row[i] * a[i];
            }
            next[j] = activate(z, act);
        }
        a = std::move(next);
        if (keep != nullptr) {
            keep->push_back(a);
        }
    }
    return a[0];
}

} // namespace

double forward(const Network& net, const std::vector<double>& x) {
    return forward_impl(net, x.data(), x.size(), nullptr);
}

std::vector<double> forward_batch(const Network& net, const FeatureMatrix& m) {
    std::vector<double> out(m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) {
        out[r] = forward_impl(net, m.values.data() + r * m.cols, m.cols, nullptr);
    }
    return out;
}

double mse(const std::vector<double>& y, const std::vector<double>& yhat) {
    if (y.size() != yhat.size()) {
        throw std::invalid_argument("mse length mismatch: " + std::to_string(y.size()) + " vs " +
                                    std::to_string(yhat.size()));
    }
    if (y.empty()) {
        throw std::invalid_argument("mse needs at least one element");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double diff = y[i] - yhat[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(y.size());
}

double mse_of_network(const Network& net, const FeatureMatrix& m) {
    return mse(m.target, forward_batch(net, m));
}

std::vector<double> gradient(const Network& net, const FeatureMatrix& batch) {
    if (batch.rows == 0) {
        throw std::invalid_argument("gradient needs a non-empty batch");
    }
    const std::size_t layers = net.weights.size();
    std::vector<std::vector<double>> grad_w(layers);
    std::vector<std::vector<double>> grad_b(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        grad_w[l].assign(net.weights[l].size(), 0.0);
        grad_b[l].assign(net.biases[l].size(), 0.0);
    }

    std::vector<std::vector<double>> acts;
    const double inv_n = 1.0 / static_cast<double>(batch.rows);
    for (std::size_t r = 0; r < batch.rows; ++r) {
        const double yhat = forward_impl(net, batch.values.data() + r * batch.cols, batch.cols,
                                         &acts);
        // dL/dyhat for L = mean((y - yhat)^2); output activation is linear.
        std::vector<double> delta{2.0 * (yhat - batch.target[r]) * inv_n};
        for (std::size_t l = layers; l-- > 0;) {
            const auto in = static_cast<std::size_t>(net.layer_sizes[l]);
            const auto out = static_cast<std::size_t>(net.layer_sizes[l + 1]);
            const auto& prev = acts[l];
            for (std::size_t j = 0; j < out; ++j) {
                grad_b[l][j] += delta[j];
                double* row = grad_w[l].data() + j * in;
                for (std::size_t i = 0; i < in; ++i) {
                    row[i] += delta[j] * prev[i];
                }
            }
            if (l == 0) {
                break;
            }
            // The layer feeding this one is always a hidden layer.
            std::vector<double> prev_delta(in, 0.0);
            const auto& w = net.weights[l];
            for (std::size_t i = 0; i < in; ++i) {
                double sum = 0.0;
                for (std::size_t j = 0; j < out; ++j) {
                    sum += w[j * in + i] * delta[j];
                }
                const double a = prev[i];
                const double dact = net.hidden_act == Activation::Sigmoid ? a * (1.0 - a) : 1.0;
                prev_delta[i] = sum * dact;
            }
            delta = std::move(prev_delta);
        }
    }

    std::vector<double> flat;
    flat.reserve(net.parameter_count());
    for (std::size_t l = 0; l < layers; ++l) {
        flat.insert(flat.end(), grad_w[l].begin(), grad_w[l].end());
        flat.insert(flat.end(), grad_b[l].begin(), grad_b[l].end());
    }
    return flat;
}

TrainResult train_backprop(Network net, const FeatureMatrix& train_set,
                           const FeatureMatrix& val_set, const TrainConfig& cfg) {
    if (!(cfg.learning_rate > 0.0)) {
        throw std::invalid_argument("learning rate must be > 0");
    }
    if (cfg.max_epochs < 1) {
        throw std::invalid_argument("max epochs must be >= 1");
    }
    if (train_set.rows == 0) {
        throw std::invalid_argument("training set is empty");
    }

    TrainResult result;
    const bool use_validation = val_set.rows > 0 && cfg.max_validation_failures > 0;
    double best_val = std::numeric_limits<double>::infinity();
    Network best_net = net;
    int failures = 0;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const auto grad = gradient(net, train_set);
        std::size_t k = 0;
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            for (double& w : net.weights[l]) {
                w -= cfg.learning_rate * grad[k++];
            }
            for (double& b : net.biases[l]) {
                b -= cfg.learning_rate * grad[k++];
            }
        }
        const double train_loss = mse_of_network(net, train_set);
        result.history.push_back(train_loss);
        result.epochs_run = epoch;

        if (train_loss <= cfg.goal) {
            result.stop_reason = "goal";
            result.net = std::move(net);
            return result;
        }
        if (use_validation) {
            const double val_loss = mse_of_network(net, val_set);
            if (val_loss < best_val) {
                best_val = val_loss;
                best_net = net;
                failures = 0;
            } else {
                ++failures;
                if (failures >= cfg.max_validation_failures) {
                    result.stop_reason = "validation";
                    result.net = std::move(best_net);
                    return result;
                }
            }
        }
    }
    result.stop_reason = "max_epochs";
    result.net = std::move(net);
    return result;
}

std::vector<double> encode_weights(const Network& net) {
    std::vector<double> flat;
    flat.reserve(net.parameter_count());
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        flat.insert(flat.end(), net.weights[l].begin(), net.weights[l].end());
        flat.insert(flat.end(), net.biases[l].begin(), net.biases[l].end());
    }
    return flat;
}

Network decode_weights(const std::vector<int>& layer_sizes, const std::vector<double>& flat,
                       Activation hidden_act, Activation output_act) {
    check_sizes(layer_sizes);
    const std::size_t expected = parameter_count(layer_sizes);
    if (flat.size() != expected) {
        throw std::invalid_argument("weight vector has " + std::to_string(flat.size()) +
                                    " entries, network shape expects " +
                                    std::to_string(expected));
    }
    Network net;
    net.layer_sizes = layer_sizes;
    net.hidden_act = hidden_act;
    net.output_act = output_act;
    std::size_t k = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const auto in = static_cast<std::size_t>(layer_sizes[l]);
        const auto out = static_cast<std::size_t>(layer_sizes[l + 1]);
        net.weights.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(k),
                                 flat.begin() + static_cast<std::ptrdiff_t>(k + out * in));
        k += out * in;
        net.biases.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(k),
                                flat.begin() + static_cast<std::ptrdiff_t>(k + out));
        k += out;
    }
    return net;
}

nlohmann::json network_to_json(const Network& net) {
    return nlohmann::json{{"layer_sizes", net.layer_sizes},
                          {"hidden_activation", activation_name(net.hidden_act)},
                          {"output_activation", activation_name(net.output_act)},
                          {"parameters", encode_weights(net)},
                          {"seed", net.init_seed}};
}

Network network_from_json(const nlohmann::json& j) {
    Network net = decode_weights(j.at("layer_sizes").get<std::vector<int>>(),
                                 j.at("parameters").get<std::vector<double>>(),
                                 activation_from_name(j.at("hidden_activation").get<std::string>()),
                                 activation_from_name(j.at("output_activation").get<std::string>()));
    net.init_seed = j.value("seed", std::uint64_t{0});
    return net;
}

} // namespace scs
