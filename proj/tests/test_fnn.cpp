#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "scs/fnn.hpp"
#include "scs/rng.hpp"

namespace {

scs::FeatureMatrix matrix_from(const std::vector<std::vector<double>>& rows,
                               const std::vector<double>& target) {
    scs::FeatureMatrix m;
    m.rows = rows.size();
    m.cols = rows.empty() ? 0 : rows[0].size();
    for (const auto& r : rows) {
        m.values.insert(m.values.end(), r.begin(), r.end());
    }
    m.target = target;
    return m;
}

} // namespace

TEST_CASE("parameter count follows the layer sizes") {
    CHECK(scs::parameter_count({6, 14, 1}) == 113);  // 6*14 + 14 + 14*1 + 1
    CHECK(scs::parameter_count({3, 5, 1}) == 26);
    CHECK(scs::parameter_count({4, 1}) == 5);
    CHECK(scs::init_network({6, 14, 1}, 7).parameter_count() == 113);
}

TEST_CASE("init_network draws bounded weights and zero biases") {
    const scs::Network net = scs::init_network({3, 5, 1}, 11);
    REQUIRE(net.weights.size() == 2);
    REQUIRE(net.weights[0].size() == 15);
    REQUIRE(net.weights[1].size() == 5);
    for (double w : net.weights[0]) {
        CHECK(std::abs(w) <= 1.0 / std::sqrt(3.0));
    }
    for (double w : net.weights[1]) {
        CHECK(std::abs(w) <= 1.0 / std::sqrt(5.0));
    }
    for (const auto& layer : net.biases) {
        for (double b : layer) {
            CHECK(b == 0.0);
        }
    }
    CHECK(net.init_seed == 11);

    const scs::Network again = scs::init_network({3, 5, 1}, 11);
    CHECK(again.weights[0] == net.weights[0]);
    const scs::Network other = scs::init_network({3, 5, 1}, 12);
    CHECK(other.weights[0] != net.weights[0]);

    CHECK_THROWS_AS(scs::init_network({4}, 1), std::invalid_argument);
    CHECK_THROWS_AS(scs::init_network({4, 0, 1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(scs::init_network({4, 5, 2}, 1), std::invalid_argument);
}

TEST_CASE("forward computes a linear layer by hand") {
    scs::Network net;
    net.layer_sizes = {2, 1};
    net.weights = {{0.5, -0.25}};
    net.biases = {{0.75}};
    CHECK(scs::forward(net, {2.0, 4.0}) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(scs::forward(net, {1.0}), std::invalid_argument);
}

TEST_CASE("hidden sigmoid at zero input gives one half") {
    scs::Network net;
    net.layer_sizes = {1, 1, 1};
    net.weights = {{0.0}, {2.0}};
    net.biases = {{0.0}, {0.25}};
    // hidden activation sigmoid(0) = 0.5; output = 2 * 0.5 + 0.25
    CHECK(scs::forward(net, {3.0}) == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("sigmoid stays finite at extreme pre-activations") {
    scs::Network net;
    net.layer_sizes = {1, 1, 1};
    net.weights = {{1000.0}, {1.0}};
    net.biases = {{0.0}, {0.0}};
    CHECK(scs::forward(net, {1.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(scs::forward(net, {-1.0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::isfinite(scs::forward(net, {1e6})));
}

TEST_CASE("mse matches the hand fixture") {
    CHECK(scs::mse({1.0, 2.0}, {0.0, 0.0}) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(scs::mse({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
    CHECK_THROWS_AS(scs::mse({1.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(scs::mse({}, {}), std::invalid_argument);
}

TEST_CASE("encode/decode is a bijection in codec order") {
    const scs::Network net = scs::init_network({4, 7, 1}, 9);
    const std::vector<double> flat = scs::encode_weights(net);
    CHECK(flat.size() == net.parameter_count());
    // layer 0 weights first, row-major
    CHECK(flat[0] == net.weights[0][0]);
    CHECK(flat[27] == net.weights[0][27]);
    // then layer 0 biases
    CHECK(flat[28] == net.biases[0][0]);

    const scs::Network back = scs::decode_weights({4, 7, 1}, flat);
    CHECK(back.weights == net.weights);
    CHECK(back.biases == net.biases);

    CHECK_THROWS_WITH_AS(scs::decode_weights({4, 7, 1}, std::vector<double>(10, 0.0)),
                         doctest::Contains("43"), std::invalid_argument);
}

TEST_CASE("analytic gradient matches central finite differences") {
    scs::Rng rng(123);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n_in = 1 + static_cast<int>(rng.index(6));
        const int hidden = 1 + static_cast<int>(rng.index(8));
        const std::vector<int> sizes = {n_in, hidden, 1};
        scs::Network net = scs::init_network(sizes, 1000 + trial);

        const std::size_t rows = 3 + rng.index(5);
        std::vector<std::vector<double>> X;
        std::vector<double> y;
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<double> row;
            for (int c = 0; c < n_in; ++c) {
                row.push_back(rng.uniform(-1.0, 1.0));
            }
            X.push_back(row);
            y.push_back(rng.uniform(-1.0, 1.0));
        }
        const scs::FeatureMatrix batch = matrix_from(X, y);

        const std::vector<double> grad = scs::gradient(net, batch);
        std::vector<double> flat = scs::encode_weights(net);
        REQUIRE(grad.size() == flat.size());

        const double h = 1e-6;
        for (std::size_t k = 0; k < flat.size(); ++k) {
            const double keep = flat[k];
            flat[k] = keep + h;
            const double up = scs::mse_of_network(scs::decode_weights(sizes, flat), batch);
            flat[k] = keep - h;
            const double down = scs::mse_of_network(scs::decode_weights(sizes, flat), batch);
            flat[k] = keep;
            const double fd = (up - down) / (2.0 * h);
            const double scale = std::max({std::abs(fd), std::abs(grad[k]), 1e-8});
            worst = std::max(worst, std::abs(fd - grad[k]) / scale);
        }
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("gradient supports a network without hidden layers") {
    scs::Network net;
    net.layer_sizes = {2, 1};
    net.weights = {{0.3, -0.1}};
    net.biases = {{0.2}};
    const scs::FeatureMatrix batch = matrix_from({{1.0, 2.0}}, {1.0});
    // prediction = 0.3 - 0.2 + 0.2 = 0.3; error = -0.7
    const auto grad = scs::gradient(net, batch);
    REQUIRE(grad.size() == 3);
    CHECK(grad[0] == doctest::Approx(2.0 * -0.7 * 1.0).epsilon(1e-12));
    CHECK(grad[1] == doctest::Approx(2.0 * -0.7 * 2.0).epsilon(1e-12));
    CHECK(grad[2] == doctest::Approx(2.0 * -0.7).epsilon(1e-12));
}

TEST_CASE("training stops at the goal on an easy constant fit") {
    const scs::FeatureMatrix train =
        matrix_from({{0.0}, {0.25}, {0.5}, {0.75}, {1.0}}, {0.5, 0.5, 0.5, 0.5, 0.5});
    scs::TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.max_epochs = 20000;
    cfg.goal = 1e-6;
    const scs::TrainResult result =
        scs::train_backprop(scs::init_network({1, 4, 1}, 3), train, scs::FeatureMatrix{}, cfg);
    CHECK(result.stop_reason == "goal");
    CHECK(result.history.back() <= 1e-6);
    CHECK(result.epochs_run == static_cast<int>(result.history.size()));
    CHECK(result.epochs_run < 20000);
}

TEST_CASE("a negative goal disables the goal stop") {
    const scs::FeatureMatrix train = matrix_from({{0.0}, {1.0}}, {0.0, 1.0});
    scs::TrainConfig cfg;
    cfg.learning_rate = 0.1;
    cfg.max_epochs = 50;
    cfg.goal = -1.0;
    const scs::TrainResult result =
        scs::train_backprop(scs::init_network({1, 2, 1}, 5), train, scs::FeatureMatrix{}, cfg);
    CHECK(result.stop_reason == "max_epochs");
    CHECK(result.epochs_run == 50);
    CHECK(result.history.size() == 50);
}

TEST_CASE("validation early stop returns the best snapshot") {
    // Train and validation share the input but want opposite targets, so
    // fitting the training target is guaranteed to push validation loss up.
    const scs::FeatureMatrix train = matrix_from({{0.0}}, {2.0});
    const scs::FeatureMatrix val = matrix_from({{0.0}}, {0.0});
    scs::TrainConfig cfg;
    cfg.learning_rate = 0.3;
    cfg.max_epochs = 20000;
    cfg.goal = -1.0;  // only validation can stop it early
    cfg.max_validation_failures = 25;
    const scs::TrainResult result =
        scs::train_backprop(scs::init_network({1, 4, 1}, 8), train, val, cfg);
    CHECK(result.stop_reason == "validation");
    CHECK(result.epochs_run < cfg.max_epochs);

    // the returned network is the best-validation snapshot: replaying the
    // same epochs without early stopping cannot land on a better one
    const double returned_val = scs::mse_of_network(result.net, val);
    scs::TrainConfig replay = cfg;
    replay.max_validation_failures = 0;  // disable early stop
    replay.max_epochs = result.epochs_run;
    const scs::TrainResult full =
        scs::train_backprop(scs::init_network({1, 4, 1}, 8), train, val, replay);
    CHECK(returned_val <= scs::mse_of_network(full.net, val) + 1e-12);
    // and the snapshot really differs from the final network of the replay
    CHECK(returned_val < scs::mse_of_network(full.net, val));
}

TEST_CASE("training history is the post-update training loss") {
    const scs::FeatureMatrix train = matrix_from({{0.0}, {1.0}}, {0.2, 0.8});
    scs::Network net = scs::init_network({1, 3, 1}, 2);
    scs::TrainConfig cfg;
    cfg.learning_rate = 0.3;
    cfg.max_epochs = 1;
    cfg.goal = -1.0;
    const scs::TrainResult one = scs::train_backprop(net, train, scs::FeatureMatrix{}, cfg);
    REQUIRE(one.history.size() == 1);
    CHECK(one.history[0] == doctest::Approx(scs::mse_of_network(one.net, train)).epsilon(1e-15));
    CHECK(one.history[0] != scs::mse_of_network(net, train));  // the step moved the loss
}

TEST_CASE("training rejects bad configuration") {
    const scs::FeatureMatrix train = matrix_from({{0.0}}, {0.0});
    scs::TrainConfig cfg;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(scs::train_backprop(scs::init_network({1, 2, 1}, 1), train,
                                        scs::FeatureMatrix{}, cfg),
                    std::invalid_argument);
    cfg.learning_rate = 0.1;
    cfg.max_epochs = 0;
    CHECK_THROWS_AS(scs::train_backprop(scs::init_network({1, 2, 1}, 1), train,
                                        scs::FeatureMatrix{}, cfg),
                    std::invalid_argument);
    cfg.max_epochs = 10;
    CHECK_THROWS_AS(scs::train_backprop(scs::init_network({1, 2, 1}, 1), scs::FeatureMatrix{},
                                        scs::FeatureMatrix{}, cfg),
                    std::invalid_argument);
}

TEST_CASE("network json round-trips every field") {
    scs::Network net = scs::init_network({3, 4, 1}, 21);
    net.weights[0][0] = -0.123456789012345;
    const scs::Network back = scs::network_from_json(scs::network_to_json(net));
    CHECK(back.layer_sizes == net.layer_sizes);
    CHECK(back.weights == net.weights);
    CHECK(back.biases == net.biases);
    CHECK(back.hidden_act == net.hidden_act);
    CHECK(back.output_act == net.output_act);
    CHECK(back.init_seed == net.init_seed);
}

TEST_CASE("activation names round-trip") {
    CHECK(scs::activation_name(scs::Activation::Sigmoid) == "sigmoid");
    CHECK(scs::activation_name(scs::Activation::Linear) == "linear");
    CHECK(scs::activation_from_name("sigmoid") == scs::Activation::Sigmoid);
    CHECK(scs::activation_from_name("linear") == scs::Activation::Linear);
    CHECK_THROWS_AS(scs::activation_from_name("tanh"), std::invalid_argument);
}
