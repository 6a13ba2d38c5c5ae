#include "mobility/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <random>

#include <json.hpp>

#include "mobility/error.hpp"
#include "mobility/features.hpp"

namespace mobility {

namespace {

using json = nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Portable draws on top of mt19937_64; std distributions are not specified
// bit-for-bit across standard libraries.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::int64_t below(std::int64_t n) { return static_cast<std::int64_t>(uniform() * static_cast<double>(n)); }
    std::int64_t between(std::int64_t lo, std::int64_t hi) { return lo + below(hi - lo + 1); }

private:
    std::mt19937_64 engine_;
};

// Habitual location index per hour bin: night at home, office hours at work,
// commute and evening at the third place.
int habitual_slot(int hour, int n_locations) {
    int slot = 0;
    if (hour >= 9 && hour <= 17)
        slot = 1;
    else if (hour == 8 || (hour >= 18 && hour <= 20))
        slot = 2;
    return slot % n_locations;
}

std::vector<std::size_t> pick_distinct(Draw& draw, std::int64_t lo, std::int64_t hi_exclusive, int count) {
    std::vector<std::size_t> pool;
    for (auto d = lo; d < hi_exclusive; ++d) pool.push_back(static_cast<std::size_t>(d));
    for (int i = 0; i < count; ++i) {
        const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(draw.below(static_cast<std::int64_t>(pool.size()) - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(count));
    return pool;
}

// Like pick_distinct, but each day is drawn with probability proportional to
// its weight among the days not yet taken.
std::vector<std::size_t> pick_weighted(Draw& draw, std::int64_t lo, std::int64_t hi_exclusive, int count,
                                       const std::function<double(std::int64_t)>& weight) {
    std::vector<std::pair<std::size_t, double>> pool;
    for (auto d = lo; d < hi_exclusive; ++d) pool.emplace_back(static_cast<std::size_t>(d), weight(d));
    std::vector<std::size_t> out;
    for (int i = 0; i < count; ++i) {
        double total = 0.0;
        for (const auto& [d, w] : pool) total += w;
        double r = draw.uniform() * total;
        std::size_t j = 0;
        while (j + 1 < pool.size() && r >= pool[j].second) r -= pool[j++].second;
        out.push_back(pool[j].first);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    }
    return out;
}

std::string user_name(std::size_t index, std::size_t n_users) {
    std::size_t width = 3;
    for (std::size_t v = n_users > 0 ? n_users - 1 : 0, w = 1; v >= 10; v /= 10) width = std::max(width, ++w);
    std::string digits = std::to_string(index);
    return "u" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

}  // namespace

void SynthConfig::validate() const {
    if (n_users == 0) throw UsageError("synth: n_users must be positive");
    if (end_date < start_date) throw UsageError("synth: empty date range");
    if ((end_date - start_date).count() + 1 < 2) throw UsageError("synth: date range must cover at least 2 days");
    if (cadence_minutes <= 0 || 60 % cadence_minutes != 0)
        throw UsageError("synth: cadence_minutes must divide 60");
    if (locations_per_user < 1 || locations_per_user > 100)
        throw UsageError("synth: locations_per_user must be in [1, 100]");
    if (!(base_habit_prob >= 0.0 && base_habit_prob <= 1.0)) throw UsageError("synth: base_habit_prob not in [0, 1]");
    if (!(noise >= 0.0 && noise <= 1.0)) throw UsageError("synth: noise not in [0, 1]");
    for (const auto& [name, delta] : effects) {
        if (feature_index(name) < 0) throw UsageError("synth: unknown effect factor '" + name + "'");
        if (!(delta >= -1.0 && delta <= 1.0)) throw UsageError("synth: effect '" + name + "' not in [-1, 1]");
    }
    if (stagger_days < 0) throw UsageError("synth: stagger_days must be >= 0");
    if (!(weekday_missing_skew >= 0.0 && weekday_missing_skew < 1.0))
        throw UsageError("synth: weekday_missing_skew not in [0, 1)");
    const auto days = (end_date - start_date).count() + 1;
    const auto half = days / 2;
    // learn interior: [1, half), test interior: [half, days - 1)
    if (missing_days_per_half < 0 || missing_days_per_half > half - 1 || missing_days_per_half > days - 1 - half)
        throw UsageError("synth: missing_days_per_half too large for the date range");
}

SynthConfig SynthConfig::from_json(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError(std::string("synth config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("synth config must be a JSON object");
    SynthConfig c;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "n_users") c.n_users = value.get<std::size_t>();
            else if (key == "start_date") c.start_date = parse_date(value.get<std::string>());
            else if (key == "end_date") c.end_date = parse_date(value.get<std::string>());
            else if (key == "cadence_minutes") c.cadence_minutes = value.get<int>();
            else if (key == "locations_per_user") c.locations_per_user = value.get<int>();
            else if (key == "base_habit_prob") c.base_habit_prob = value.get<double>();
            else if (key == "effects") c.effects = value.get<std::map<std::string, double>>();
            else if (key == "noise") c.noise = value.get<double>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "missing_days_per_half") c.missing_days_per_half = value.get<int>();
            else if (key == "stagger_days") c.stagger_days = value.get<int>();
            else if (key == "weekday_missing_skew") c.weekday_missing_skew = value.get<double>();
            else if (key == "timezone") c.timezone = UtcOffset::parse(value.get<std::string>());
            else throw UsageError("synth config: unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("synth config: ") + e.what());
    } catch (const RecordError& e) {
        throw UsageError(std::string("synth config: ") + e.what());
    }
    c.validate();
    return c;
}

std::string SynthConfig::to_json() const {
    json j;
    j["n_users"] = n_users;
    j["start_date"] = format_date(start_date);
    j["end_date"] = format_date(end_date);
    j["cadence_minutes"] = cadence_minutes;
    j["locations_per_user"] = locations_per_user;
    j["base_habit_prob"] = base_habit_prob;
    j["effects"] = effects;
    j["noise"] = noise;
    j["seed"] = seed;
    j["missing_days_per_half"] = missing_days_per_half;
    j["stagger_days"] = stagger_days;
    j["weekday_missing_skew"] = weekday_missing_skew;
    j["timezone"] = timezone.to_string();
    return j.dump(2);
}

std::vector<SynthUser> generate(const SynthConfig& config, const HolidayCalendar& calendar) {
    config.validate();
    const auto n_days = (config.end_date - config.start_date).count() + 1;
    const auto half = n_days / 2;
    const int ticks = 60 / config.cadence_minutes;

    std::array<double, kFeatureCount> effect{};
    for (const auto& [name, delta] : config.effects) effect[static_cast<std::size_t>(feature_index(name))] = delta;

    std::vector<SynthUser> users;
    users.reserve(config.n_users);
    for (std::size_t u = 0; u < config.n_users; ++u) {
        Draw draw(splitmix64(config.seed ^ splitmix64(u + 1)));
        SynthUser user;
        user.user_id = user_name(u, config.n_users);

        const auto offset = draw.between(0, config.stagger_days);
        std::vector<std::size_t> missing;
        std::vector<std::size_t> missing_test;
        if (config.weekday_missing_skew > 0.0) {
            std::array<double, 7> bias{};
            for (auto& b : bias) b = 1.0 + config.weekday_missing_skew * (2.0 * draw.uniform() - 1.0);
            const auto weight = [&](std::int64_t d) {
                return bias[static_cast<std::size_t>(day_of_week(config.start_date + std::chrono::days{offset + d}))];
            };
            missing = pick_weighted(draw, 1, half, config.missing_days_per_half, weight);
            missing_test = pick_weighted(draw, half, n_days - 1, config.missing_days_per_half, weight);
        } else {
            missing = pick_distinct(draw, 1, half, config.missing_days_per_half);
            missing_test = pick_distinct(draw, half, n_days - 1, config.missing_days_per_half);
        }
        missing.insert(missing.end(), missing_test.begin(), missing_test.end());

        std::vector<RoundedCoord> places;
        const RoundedCoord home{static_cast<std::int32_t>(draw.between(3500, 3599)),
                                static_cast<std::int32_t>(draw.between(13900, 13999))};
        places.push_back(home);
        while (static_cast<int>(places.size()) < config.locations_per_user) {
            const RoundedCoord c{home.lat + static_cast<std::int32_t>(draw.between(-20, 20)),
                                 home.lon + static_cast<std::int32_t>(draw.between(-20, 20))};
            if (std::find(places.begin(), places.end(), c) == places.end()) places.push_back(c);
        }

        user.records.reserve(static_cast<std::size_t>(n_days) * 24 * static_cast<std::size_t>(ticks));
        for (std::int64_t d = 0; d < n_days; ++d) {
            if (std::find(missing.begin(), missing.end(), static_cast<std::size_t>(d)) != missing.end()) continue;
            const LocalDate date = config.start_date + std::chrono::days{offset + d};

            double p = config.base_habit_prob;
            const auto features = extract_features(std::span<const LocalDate>(&date, 1), calendar);
            for (std::size_t f = 0; f < kFeatureCount; ++f)
                if (features.counts[f] != 0) p += effect[f];
            p = std::clamp(p, 0.0, 1.0);

            for (int hour = 0; hour < 24; ++hour) {
                const int slot = habitual_slot(hour, config.locations_per_user);
                RoundedCoord cell = places[static_cast<std::size_t>(slot)];
                if (draw.uniform() >= p) {
                    if (draw.uniform() < config.noise || places.size() < 2) {
                        cell = RoundedCoord{static_cast<std::int32_t>(draw.between(-6000, 5999)),
                                            static_cast<std::int32_t>(draw.between(-17999, 17999))};
                    } else {
                        auto other = static_cast<std::size_t>(draw.below(static_cast<std::int64_t>(places.size()) - 1));
                        if (other >= static_cast<std::size_t>(slot)) ++other;
                        cell = places[other];
                    }
                }
                const auto local = std::chrono::sys_seconds{date} + std::chrono::hours{hour};
                for (int t = 0; t < ticks; ++t) {
                    GpsRecord rec;
                    rec.user_id = user.user_id;
                    rec.timestamp = Instant{local + std::chrono::minutes{t * config.cadence_minutes} -
                                            config.timezone.minutes};
                    rec.lat_micro = static_cast<std::int64_t>(cell.lat) * 10000 + draw.between(-4999, 4999);
                    rec.lon_micro = static_cast<std::int64_t>(cell.lon) * 10000 + draw.between(-4999, 4999);
                    user.records.push_back(std::move(rec));
                }
            }
        }
        users.push_back(std::move(user));
    }
    return users;
}

void write_synth_csv(std::ostream& out, const std::vector<SynthUser>& users, UtcOffset offset) {
    out << kRecordHeader << '\n';
    for (const auto& u : users)
        for (const auto& r : u.records)
            out << u.user_id << ',' << format_timestamp(r.timestamp, offset) << ',' << format_micro_degrees(r.lat_micro)
                << ',' << format_micro_degrees(r.lon_micro) << '\n';
}

}  // namespace mobility
