// Phase timing and the explicit power model that turns elapsed time into
// energy and CO2e.
#pragma once

#include <chrono>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace greenbench {

class MeterError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct MeterConfig {
  double power_watts = 45.0;
  double carbon_intensity = 400.0;  // g CO2e per kWh
  double overhead_multiplier = 1.0;
  std::string environment_note;

  void validate() const;

  /// Defaults overridden by POWER_WATTS and CARBON_INTENSITY_G_KWH when set.
  static MeterConfig from_environment();
  static MeterConfig from_environment(MeterConfig base);
};

struct Emissions {
  double energy_kwh = 0.0;
  double emissions_g = 0.0;
};

/// energy = seconds * watts * overhead / 3.6e6; grams = energy * intensity.
Emissions to_emissions(double total_seconds, const MeterConfig& config);

struct PhaseRecord {
  std::string label;
  double seconds = 0.0;
};

struct RunMeasurement {
  std::vector<PhaseRecord> phases;
  double total_seconds = 0.0;
  double energy_kwh = 0.0;
  double emissions_g = 0.0;
  std::string started_at;  // UTC wall-clock, for the run log only
};

/// One metering context per workflow run. Phases are measured with the
/// steady clock and may not nest.
class Meter {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Meter(MeterConfig config = {});

  Meter(const Meter&) = delete;
  Meter& operator=(const Meter&) = delete;

  template <typename Work>
  auto measure(const std::string& label, Work&& work) -> std::invoke_result_t<Work> {
    const Guard guard(*this);
    const auto start = Clock::now();
    if constexpr (std::is_void_v<std::invoke_result_t<Work>>) {
      std::invoke(std::forward<Work>(work));
      record(label, Clock::now() - start);
    } else {
      auto result = std::invoke(std::forward<Work>(work));
      record(label, Clock::now() - start);
      return result;
    }
  }

  const std::vector<PhaseRecord>& phases() const { return phases_; }
  const MeterConfig& config() const { return config_; }

  /// Totals the recorded phases and applies the power model.
  RunMeasurement finish() const;

 private:
  class Guard {
   public:
    explicit Guard(Meter& m) : meter_(m) {
      if (meter_.active_) throw MeterError("nested measurement inside an active phase");
      meter_.active_ = true;
    }
    ~Guard() { meter_.active_ = false; }
    Guard(const Guard&) = delete;
    Guard& operator=(const Guard&) = delete;

   private:
    Meter& meter_;
  };

  void record(const std::string& label, Clock::duration elapsed);

  MeterConfig config_;
  std::vector<PhaseRecord> phases_;
  std::string started_at_;
  bool active_ = false;
};

std::string utc_timestamp();

}  // namespace greenbench
