#include "greenbench/meter.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>

namespace greenbench {

void MeterConfig::validate() const {
  if (!(power_watts > 0.0) || !std::isfinite(power_watts)) throw MeterError("power_watts must be positive");
  if (!(carbon_intensity >= 0.0) || !std::isfinite(carbon_intensity)) {
    throw MeterError("carbon_intensity must be non-negative");
  }
  if (!(overhead_multiplier >= 1.0) || !std::isfinite(overhead_multiplier)) {
    throw MeterError("overhead_multiplier must be at least 1");
  }
}

namespace {

double env_double(const char* name, double fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0') throw MeterError(std::string(name) + " is not a number: " + raw);
  return v;
}

}  // namespace

MeterConfig MeterConfig::from_environment() { return from_environment(MeterConfig{}); }

MeterConfig MeterConfig::from_environment(MeterConfig base) {
  base.power_watts = env_double("POWER_WATTS", base.power_watts);
  base.carbon_intensity = env_double("CARBON_INTENSITY_G_KWH", base.carbon_intensity);
  return base;
}

Emissions to_emissions(double total_seconds, const MeterConfig& config) {
  if (total_seconds < 0.0) throw MeterError("elapsed time cannot be negative");
  Emissions e;
  e.energy_kwh = total_seconds * config.power_watts * config.overhead_multiplier / 3.6e6;
  e.emissions_g = e.energy_kwh * config.carbon_intensity;
  return e;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Meter::Meter(MeterConfig config) : config_(std::move(config)), started_at_(utc_timestamp()) {
  config_.validate();
}

void Meter::record(const std::string& label, Clock::duration elapsed) {
  phases_.push_back({label, std::chrono::duration<double>(elapsed).count()});
}

RunMeasurement Meter::finish() const {
  RunMeasurement m;
  m.phases = phases_;
  m.started_at = started_at_;
  for (const PhaseRecord& p : phases_) m.total_seconds += p.seconds;
  const Emissions e = to_emissions(m.total_seconds, config_);
  m.energy_kwh = e.energy_kwh;
  m.emissions_g = e.emissions_g;
  return m;
}

}  // namespace greenbench
