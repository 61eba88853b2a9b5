#include "satml/logit.hpp"
#include "satml/text.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace satml {

namespace {

/// log(1 + e^z) without overflow.
double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

struct Standardized {
  std::vector<FeatureArray> x;
  std::vector<double> y;
};

Standardized standardize_rows(const Standardizer &s, const Dataset &d) {
  Standardized out;
  out.x.reserve(d.size());
  out.y.reserve(d.size());
  for (const DatasetRow &r : d.rows) {
    out.x.push_back(s.apply(r.features.to_array()));
    out.y.push_back(r.label);
  }
  return out;
}

double linear(const FeatureArray &w, double b, const FeatureArray &x) {
  double z = b;
  for (std::size_t i = 0; i < kNumFeatures; ++i)
    z += w[i] * x[i];
  return z;
}

LossGradient evaluate(const FeatureArray &w, double b, const Standardized &data,
                      double lambda, bool with_gradient) {
  LossGradient out;
  const double n = static_cast<double>(data.x.size());
  for (std::size_t r = 0; r < data.x.size(); ++r) {
    const double z = linear(w, b, data.x[r]);
    const double y = data.y[r];
    // -[y log s(z) + (1-y) log(1-s(z))] = y*softplus(-z) + (1-y)*softplus(z)
    out.loss += y * softplus(-z) + (1.0 - y) * softplus(z);
    if (with_gradient) {
      const double residual = sigmoid(z) - y;
      for (std::size_t i = 0; i < kNumFeatures; ++i)
        out.grad_weights[i] += residual * data.x[r][i];
      out.grad_bias += residual;
    }
  }
  out.loss /= n;
  double wsq = 0;
  for (double wi : w)
    wsq += wi * wi;
  out.loss += 0.5 * lambda * wsq;
  if (with_gradient) {
    for (std::size_t i = 0; i < kNumFeatures; ++i)
      out.grad_weights[i] = out.grad_weights[i] / n + lambda * w[i];
    out.grad_bias /= n;
  }
  return out;
}

void require_finite(const FeatureArray &x) {
  for (double v : x)
    if (!std::isfinite(v))
      throw std::invalid_argument("non-finite feature value");
}

} // namespace

FeatureArray Standardizer::apply(const FeatureArray &x) const {
  FeatureArray out;
  for (std::size_t i = 0; i < kNumFeatures; ++i)
    out[i] = (x[i] - mean[i]) / scale[i];
  return out;
}

double sigmoid(double z) {
  if (z >= 0)
    return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Standardizer fit_standardizer(const Dataset &d) {
  if (d.empty())
    throw std::invalid_argument("cannot fit a standardizer on an empty dataset");
  Standardizer s;
  const double n = static_cast<double>(d.size());
  FeatureArray sum{}, sq{};
  for (const DatasetRow &r : d.rows) {
    const FeatureArray x = r.features.to_array();
    for (std::size_t i = 0; i < kNumFeatures; ++i)
      sum[i] += x[i];
  }
  for (std::size_t i = 0; i < kNumFeatures; ++i)
    s.mean[i] = sum[i] / n;
  for (const DatasetRow &r : d.rows) {
    const FeatureArray x = r.features.to_array();
    for (std::size_t i = 0; i < kNumFeatures; ++i)
      sq[i] += (x[i] - s.mean[i]) * (x[i] - s.mean[i]);
  }
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    const double sd = std::sqrt(sq[i] / n);
    // Relative cutoff: a feature that differs only by rounding is constant.
    s.scale[i] = sd > 1e-12 * std::max(1.0, std::abs(s.mean[i])) ? sd : 1.0;
  }
  return s;
}

LossGradient loss_and_gradient(const LogisticModel &m, const Dataset &d,
                               double l2_lambda) {
  if (d.empty())
    throw std::invalid_argument("loss over an empty dataset");
  return evaluate(m.weights, m.bias, standardize_rows(m.standardizer, d),
                  l2_lambda, true);
}

LogisticModel train(const Dataset &d, const TrainConfig &c, LossTrace *trace) {
  if (!(c.learning_rate > 0))
    throw std::invalid_argument("learning rate must be positive");
  if (c.l2_lambda < 0)
    throw std::invalid_argument("l2 lambda must be nonnegative");
  bool has_pos = false, has_neg = false;
  for (const DatasetRow &r : d.rows)
    (r.label == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::invalid_argument("training needs both satisfiable and unsatisfiable rows");

  LogisticModel m;
  m.config = c;
  m.standardizer = fit_standardizer(d);
  m.dataset_fingerprint = d.fingerprint();
  m.training_rows = d.size();
  const Standardized data = standardize_rows(m.standardizer, d);
  const double lambda = c.l2_lambda;

  LossGradient cur = evaluate(m.weights, m.bias, data, lambda, true);
  if (trace)
    trace->push_back(cur.loss);

  std::size_t epoch = 0;
  for (; epoch < c.epochs; ++epoch) {
    double gnorm = cur.grad_bias * cur.grad_bias;
    for (double g : cur.grad_weights)
      gnorm += g * g;
    if (std::sqrt(gnorm) < c.convergence_tol)
      break;

    // Gradient step on the data term, exact shrinkage for the L2 term.
    bool accepted = false;
    double eta = c.learning_rate;
    for (int halvings = 0; halvings < 60 && !accepted; ++halvings, eta *= 0.5) {
      FeatureArray w;
      for (std::size_t i = 0; i < kNumFeatures; ++i) {
        const double data_grad = cur.grad_weights[i] - lambda * m.weights[i];
        w[i] = (m.weights[i] - eta * data_grad) / (1.0 + eta * lambda);
      }
      const double b = m.bias - eta * cur.grad_bias;
      LossGradient next = evaluate(w, b, data, lambda, true);
      if (next.loss <= cur.loss) {
        m.weights = w;
        m.bias = b;
        cur = next;
        accepted = true;
      }
    }
    if (!accepted)
      break;
    if (trace)
      trace->push_back(cur.loss);
  }
  m.epochs_run = epoch;
  m.final_loss = cur.loss;
  return m;
}

double predict_proba(const LogisticModel &m, const FeatureVector &x) {
  const FeatureArray raw = x.to_array();
  require_finite(raw);
  return sigmoid(linear(m.weights, m.bias, m.standardizer.apply(raw)));
}

double accuracy(const LogisticModel &m, std::span<const DatasetRow> rows) {
  if (rows.empty())
    return 0.0;
  std::size_t correct = 0;
  for (const DatasetRow &r : rows) {
    const int predicted = predict_proba(m, r.features) >= 0.5 ? 1 : 0;
    correct += predicted == r.label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

//===----------------------------------------------------------------------===//
// Model file
//===----------------------------------------------------------------------===//

void write_model(std::ostream &out, const LogisticModel &m) {
  out << "# satml logistic model\n";
  out << "# learning_rate " << format_double(m.config.learning_rate) << '\n';
  out << "# epochs " << m.config.epochs << '\n';
  out << "# l2_lambda " << format_double(m.config.l2_lambda) << '\n';
  out << "# convergence_tol " << format_double(m.config.convergence_tol) << '\n';
  out << "# dataset_fingerprint " << m.dataset_fingerprint << '\n';
  out << "# training_rows " << m.training_rows << '\n';
  out << "# epochs_run " << m.epochs_run << '\n';
  out << "# final_loss " << format_double(m.final_loss) << '\n';
  out << "version 1\n";
  for (std::size_t i = 0; i < kNumFeatures; ++i)
    out << "weight " << i << ' ' << format_double(m.weights[i]) << '\n';
  out << "bias " << format_double(m.bias) << '\n';
  for (std::size_t i = 0; i < kNumFeatures; ++i)
    out << "standardizer " << i << ' ' << format_double(m.standardizer.mean[i])
        << ' ' << format_double(m.standardizer.scale[i]) << '\n';
}

LogisticModel read_model(std::istream &in) {
  LogisticModel m;
  std::array<bool, kNumFeatures> seen_w{}, seen_s{};
  bool seen_version = false, seen_bias = false;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string &msg) -> void {
    throw std::runtime_error("model line " + std::to_string(line_no) + ": " + msg);
  };
  auto index_of = [&](std::string_view tok) {
    const std::uint64_t i = parse_u64(tok);
    if (i >= kNumFeatures)
      fail("feature index out of range");
    return static_cast<std::size_t>(i);
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;)
      toks.push_back(t);
    if (toks.empty())
      continue;
    try {
      if (toks[0] == "#") {
        if (toks.size() != 3)
          continue;
        const std::string &key = toks[1];
        const std::string &val = toks[2];
        if (key == "learning_rate") m.config.learning_rate = parse_double(val);
        else if (key == "epochs") m.config.epochs = parse_u64(val);
        else if (key == "l2_lambda") m.config.l2_lambda = parse_double(val);
        else if (key == "convergence_tol") m.config.convergence_tol = parse_double(val);
        else if (key == "dataset_fingerprint") m.dataset_fingerprint = parse_u64(val);
        else if (key == "training_rows") m.training_rows = parse_u64(val);
        else if (key == "epochs_run") m.epochs_run = parse_u64(val);
        else if (key == "final_loss") m.final_loss = parse_double(val);
      } else if (toks[0] == "version") {
        if (toks.size() != 2 || toks[1] != "1")
          fail("unsupported model version");
        seen_version = true;
      } else if (toks[0] == "weight" && toks.size() == 3) {
        const std::size_t i = index_of(toks[1]);
        m.weights[i] = parse_double(toks[2]);
        seen_w[i] = true;
      } else if (toks[0] == "bias" && toks.size() == 2) {
        m.bias = parse_double(toks[1]);
        seen_bias = true;
      } else if (toks[0] == "standardizer" && toks.size() == 4) {
        const std::size_t i = index_of(toks[1]);
        m.standardizer.mean[i] = parse_double(toks[2]);
        m.standardizer.scale[i] = parse_double(toks[3]);
        if (!(m.standardizer.scale[i] > 0))
          fail("standardizer scale must be positive");
        seen_s[i] = true;
      } else {
        fail("unrecognized line '" + line + "'");
      }
    } catch (const std::invalid_argument &e) {
      fail(e.what());
    }
  }
  if (!seen_version || !seen_bias)
    throw std::runtime_error("model file is missing version or bias");
  for (std::size_t i = 0; i < kNumFeatures; ++i)
    if (!seen_w[i] || !seen_s[i])
      throw std::runtime_error("model file is missing entries for feature " +
                               std::to_string(i));
  return m;
}

void write_model_file(const std::string &path, const LogisticModel &m) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  write_model(out, m);
}

LogisticModel read_model_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return read_model(in);
}

//===----------------------------------------------------------------------===//
// Dataset CSV
//===----------------------------------------------------------------------===//

namespace {

std::string csv_header() {
  std::string h;
  for (const std::string &name : feature_names())
    h += name + ',';
  return h + "label,instance,seed,fix_percent";
}

std::string csv_row(const DatasetRow &r) {
  std::string s;
  for (double x : r.features.to_array())
    s += format_double(x) + ',';
  s += std::to_string(r.label) + ',' + std::to_string(r.provenance.instance) +
       ',' + std::to_string(r.provenance.seed) + ',' +
       format_double(r.provenance.fix_percent);
  return s;
}

} // namespace

std::uint64_t Dataset::fingerprint() const {
  std::uint64_t h = fnv1a(csv_header());
  for (const DatasetRow &r : rows)
    h = fnv1a(csv_row(r), h);
  return h;
}

void write_dataset_csv(std::ostream &out, const Dataset &d) {
  out << csv_header() << '\n';
  for (const DatasetRow &r : d.rows)
    out << csv_row(r) << '\n';
}

Dataset read_dataset_csv(std::istream &in) {
  Dataset d;
  std::string line;
  if (!std::getline(in, line) || line != csv_header())
    throw std::runtime_error("dataset CSV header mismatch");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty())
      continue;
    const auto cells = split(line, ',');
    if (cells.size() != kNumFeatures + 4)
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": expected " + std::to_string(kNumFeatures + 4) +
                               " columns");
    try {
      DatasetRow r;
      FeatureArray x;
      for (std::size_t i = 0; i < kNumFeatures; ++i)
        x[i] = parse_double(cells[i]);
      require_finite(x);
      r.features = FeatureVector::from_array(x);
      const std::uint64_t label = parse_u64(cells[kNumFeatures]);
      if (label > 1)
        throw std::invalid_argument("label must be 0 or 1");
      r.label = static_cast<int>(label);
      r.provenance.instance = parse_u64(cells[kNumFeatures + 1]);
      r.provenance.seed = parse_u64(cells[kNumFeatures + 2]);
      r.provenance.fix_percent = parse_double(cells[kNumFeatures + 3]);
      d.rows.push_back(r);
    } catch (const std::invalid_argument &e) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return d;
}

void write_dataset_file(const std::string &path, const Dataset &d) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  write_dataset_csv(out, d);
}

Dataset read_dataset_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return read_dataset_csv(in);
}

} // namespace satml
