// Latent Dirichlet Allocation fitted by collapsed Gibbs sampling.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "greenbench/corpus.hpp"

namespace greenbench {

class LdaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct LdaHyperparams {
  std::size_t k = 7;
  /// Symmetric document-topic prior; a non-positive value means 1/k.
  double alpha = 0.0;
  double beta = 0.01;
  std::size_t sweeps = 10;
  std::size_t per_doc_iterations = 200;
  std::uint64_t seed = 42;

  double effective_alpha() const { return alpha > 0.0 ? alpha : 1.0 / static_cast<double>(k); }
  void validate() const;
};

struct TrainingMeta {
  std::size_t sweeps = 0;
  /// log p(w | z) after each sweep (collapsed over phi).
  std::vector<double> log_likelihood;
  std::vector<std::string> warnings;
};

struct TopicModel {
  Matrix phi;    // K x V, rows sum to 1
  Matrix theta;  // D x K, rows sum to 1
  LdaHyperparams hyper;
  std::string vocab_version;
  TrainingMeta meta;

  std::size_t num_topics() const { return phi.rows(); }
  std::size_t vocab_size() const { return phi.cols(); }
  std::size_t num_docs() const { return theta.rows(); }
};

/// Fits a model. Pure function of its inputs: the same corpus and hyper
/// produce bit-identical phi and theta.
TopicModel train(const std::vector<BowDoc>& bow, const Vocabulary& vocab, const LdaHyperparams& hyper,
                 std::string vocab_version = {});

/// Estimates theta for documents not seen in training by resampling their
/// topic assignments against the frozen phi. Each document uses its own PCG
/// stream so results do not depend on batch composition.
Matrix fold_in(const TopicModel& model, const std::vector<BowDoc>& docs);

struct WordProb {
  TokenId id = 0;
  double prob = 0.0;
};

/// Top `n` words of a topic by descending probability, ties by ascending id.
std::vector<WordProb> top_words(const TopicModel& model, std::size_t topic, std::size_t n);

/// Index of the largest entry; ties go to the lowest index.
std::size_t dominant_topic(std::span<const double> theta_row);

// Serialization: JSON container, phi/theta row-major.
inline constexpr int kModelFormatVersion = 1;
std::string model_to_json(const TopicModel& model);
TopicModel model_from_json(const std::string& text);

}  // namespace greenbench
