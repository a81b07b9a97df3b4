#pragma once

// AGRAWAL loan-approval generator: nine person/loan attributes and ten
// classification functions assigning group A (label 0) or group B (label 1).
// Labels are computed on clean values; numeric attributes are then perturbed
// by a uniform offset of +-perturbation * range, clamped to the legal range.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "heros/rng.hpp"
#include "heros/streams/stream.hpp"

namespace heros::streams {

struct AgrawalConfig {
  int function = 3;  // 1..10
  double perturbation = 0.05;
  std::uint64_t seed = 1;
};

class AgrawalSource final : public StreamSource {
 public:
  explicit AgrawalSource(AgrawalConfig cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.function < 1 || cfg_.function > 10)
      throw InvalidBudget("agrawal function must be in 1..10");
    if (cfg_.perturbation < 0.0 || cfg_.perturbation > 1.0)
      throw InvalidBudget("agrawal perturbation must be in [0,1]");
    schema_.num_classes = 2;
    schema_.attributes = {
        {AttributeInfo::Kind::numeric, 0, "salary"},
        {AttributeInfo::Kind::numeric, 0, "commission"},
        {AttributeInfo::Kind::numeric, 0, "age"},
        {AttributeInfo::Kind::nominal, 5, "elevel"},
        {AttributeInfo::Kind::nominal, 20, "car"},
        {AttributeInfo::Kind::nominal, 9, "zipcode"},
        {AttributeInfo::Kind::numeric, 0, "hvalue"},
        {AttributeInfo::Kind::numeric, 0, "hyears"},
        {AttributeInfo::Kind::numeric, 0, "loan"},
    };
  }

  std::optional<Instance> next() override {
    const double salary = rng_.uniform(20000.0, 150000.0);
    const double commission = salary >= 75000.0 ? 0.0 : rng_.uniform(10000.0, 75000.0);
    const auto age = static_cast<double>(rng_.uniform_int(20, 80));
    const auto elevel = static_cast<double>(rng_.uniform_int(0, 4));
    const auto car = static_cast<double>(rng_.uniform_int(1, 20));
    const auto zipcode = static_cast<double>(rng_.uniform_int(0, 8));
    const double hbase = (9.0 - zipcode) * 100000.0;
    const double hvalue = rng_.uniform(0.5 * hbase, 1.5 * hbase);
    const auto hyears = static_cast<double>(rng_.uniform_int(1, 30));
    const double loan = rng_.uniform(0.0, 500000.0);

    const int label =
        classify(cfg_.function, salary, commission, age, elevel, hvalue, hyears, loan);

    Instance x;
    x.label = label;
    x.features = {perturb(salary, 20000.0, 150000.0),
                  commission > 0.0 ? perturb(commission, 10000.0, 75000.0) : 0.0,
                  std::round(perturb(age, 20.0, 80.0)),
                  elevel,
                  car - 1.0,  // stored as value index 0..19
                  zipcode,
                  perturb(hvalue, 0.5 * hbase, 1.5 * hbase),
                  std::round(perturb(hyears, 1.0, 30.0)),
                  perturb(loan, 0.0, 500000.0)};
    return x;
  }

  const StreamSchema& schema() const override { return schema_; }

  static int classify(int function, double salary, double commission, double age, double elevel,
                      double hvalue, double hyears, double loan) {
    const auto group_a = [](bool pred) { return pred ? 0 : 1; };
    switch (function) {
      case 1:
        return group_a(age < 40.0 || age >= 60.0);
      case 2:
        if (age < 40.0) return group_a(50000.0 <= salary && salary <= 100000.0);
        if (age < 60.0) return group_a(75000.0 <= salary && salary <= 125000.0);
        return group_a(25000.0 <= salary && salary <= 75000.0);
      case 3:
        if (age < 40.0) return group_a(elevel == 0.0 || elevel == 1.0);
        if (age < 60.0) return group_a(1.0 <= elevel && elevel <= 3.0);
        return group_a(2.0 <= elevel && elevel <= 4.0);
      case 4:
        if (age < 40.0) {
          if (elevel <= 1.0) return group_a(25000.0 <= salary && salary <= 75000.0);
          return group_a(50000.0 <= salary && salary <= 100000.0);
        }
        if (age < 60.0) {
          if (1.0 <= elevel && elevel <= 3.0) return group_a(50000.0 <= salary && salary <= 100000.0);
          return group_a(75000.0 <= salary && salary <= 125000.0);
        }
        if (2.0 <= elevel) return group_a(50000.0 <= salary && salary <= 100000.0);
        return group_a(25000.0 <= salary && salary <= 75000.0);
      case 5:
        if (age < 40.0) {
          if (50000.0 <= salary && salary <= 100000.0)
            return group_a(100000.0 <= loan && loan <= 300000.0);
          return group_a(200000.0 <= loan && loan <= 400000.0);
        }
        if (age < 60.0) {
          if (75000.0 <= salary && salary <= 125000.0)
            return group_a(200000.0 <= loan && loan <= 400000.0);
          return group_a(300000.0 <= loan && loan <= 500000.0);
        }
        if (25000.0 <= salary && salary <= 75000.0)
          return group_a(300000.0 <= loan && loan <= 500000.0);
        return group_a(100000.0 <= loan && loan <= 300000.0);
      case 6: {
        const double total = salary + commission;
        if (age < 40.0) return group_a(50000.0 <= total && total <= 100000.0);
        if (age < 60.0) return group_a(75000.0 <= total && total <= 125000.0);
        return group_a(25000.0 <= total && total <= 75000.0);
      }
      case 7:
        return group_a(2.0 * (salary + commission) / 3.0 - loan / 5.0 - 20000.0 > 0.0);
      case 8:
        return group_a(2.0 * (salary + commission) / 3.0 - 5000.0 * elevel - 20000.0 > 0.0);
      case 9:
        return group_a(2.0 * (salary + commission) / 3.0 - 5000.0 * elevel - loan / 5.0 -
                           10000.0 >
                       0.0);
      case 10: {
        const double equity = hyears >= 20.0 ? hvalue * (hyears - 20.0) / 10.0 : 0.0;
        return group_a(2.0 * (salary + commission) / 3.0 - 5000.0 * elevel + equity / 5.0 -
                           10000.0 >
                       0.0);
      }
      default:
        throw InvalidBudget("agrawal function must be in 1..10");
    }
  }

 private:
  double perturb(double v, double lo, double hi) {
    if (cfg_.perturbation <= 0.0) return v;
    v += (hi - lo) * cfg_.perturbation * rng_.uniform(-1.0, 1.0);
    return std::clamp(v, lo, hi);
  }

  AgrawalConfig cfg_;
  Rng rng_;
  StreamSchema schema_;
};

}  // namespace heros::streams
