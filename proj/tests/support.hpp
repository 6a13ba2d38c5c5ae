#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "mobility/ingestion.hpp"
#include "mobility/trajectory_model.hpp"

namespace testing {

namespace fs = std::filesystem;

inline fs::path data_dir() { return fs::path(MOBILITY_DATA_DIR); }

inline mobility::HolidayCalendar japan_2017() { return mobility::HolidayCalendar::load(data_dir() / "holidays_jp_2017.txt"); }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("mobility-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// A test-side point at `minute` past `hour` local time (+09:00) on `date`,
// placed in grid cell (lat_c, lon_c).
inline mobility::TrajectoryPoint point(const std::string& date, int hour, std::int32_t lat_c, std::int32_t lon_c,
                                       int minute = 0) {
    using namespace std::chrono;
    mobility::TrajectoryPoint p;
    p.date = mobility::parse_date(date);
    p.hour = mobility::HourBin(hour);
    p.timestamp = mobility::Instant{sys_seconds{p.date} + hours{hour} + minutes{minute} - hours{9}};
    p.coord = mobility::RoundedCoord{lat_c, lon_c};
    p.lat_micro = std::int64_t{lat_c} * 10000;
    p.lon_micro = std::int64_t{lon_c} * 10000;
    return p;
}

}  // namespace testing
