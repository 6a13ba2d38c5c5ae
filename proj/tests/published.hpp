#pragma once

// Published regression and normality figures, used for consistency checks.

#include <array>

namespace published {

struct InferenceRow {
    const char* case_name;
    const char* variable;
    double coef, se, t, p, ci_low, ci_high;
};

inline constexpr int kDof = 83;  // 97 samples, 14 parameters

inline constexpr std::array<InferenceRow, 28> kInferenceRows = {{
    {"exclude 1,21,94", "intercept", -0.85, 2.53, -0.33, 0.74, -5.88, 4.19},
    {"exclude 1,21,94", "mon", -20.37, 32.36, -0.63, 0.53, -84.72, 43.97},
    {"exclude 1,21,94", "tue", -8.38, 41.38, -0.2, 0.84, -90.65, 73.89},
    {"exclude 1,21,94", "wed", -16.20, 39.87, -0.41, 0.69, -95.48, 63.07},
    {"exclude 1,21,94", "thu", 88.72, 38.51, 2.30, 0.02, 12.14, 165.29},
    {"exclude 1,21,94", "fri", -85.02, 34.67, -2.45, 0.02, -153.95, -16.08},
    {"exclude 1,21,94", "sat", 40.12, 23.50, 1.71, 0.09, -6.60, 86.84},
    {"exclude 1,21,94", "sun", -24.26, 27.93, -0.87, 0.39, -79.80, 31.27},
    {"exclude 1,21,94", "wk1", 40.35, 54.52, 0.74, 0.46, -68.04, 148.74},
    {"exclude 1,21,94", "wk2", 35.21, 21.79, 1.62, 0.11, -8.12, 78.54},
    {"exclude 1,21,94", "wk3", 4.13, 16.45, 0.25, 0.80, -28.59, 36.85},
    {"exclude 1,21,94", "wk4", 23.42, 23.41, 1.00, 0.32, -23.13, 69.97},
    {"exclude 1,21,94", "natl", -6.28, 14.36, -0.44, 0.66, -34.83, 22.27},
    {"exclude 1,21,94", "wknd", 15.85, 17.20, 0.92, 0.36, -18.35, 50.06},
    {"exclude 1,21,30", "intercept", -2.08, 2.62, -0.79, 0.43, -7.28, 3.13},
    {"exclude 1,21,30", "mon", -30.81, 32.21, -0.96, 0.34, -94.85, 33.23},
    {"exclude 1,21,30", "tue", -5.68, 40.62, -0.14, 0.89, -86.45, 75.08},
    {"exclude 1,21,30", "wed", -14.43, 38.46, -0.38, 0.71, -90.89, 62.04},
    {"exclude 1,21,30", "thu", 64.42, 41.36, 1.56, 0.12, -17.81, 146.64},
    {"exclude 1,21,30", "fri", -87.45, 34.38, -2.54, 0.01, -155.81, -19.09},
    {"exclude 1,21,30", "sat", 36.45, 23.07, 1.58, 0.12, -9.41, 82.31},
    {"exclude 1,21,30", "sun", -24.76, 27.68, -0.90, 0.37, -79.79, 30.26},
    {"exclude 1,21,30", "wk1", 73.12, 59.83, 1.22, 0.23, -45.84, 192.09},
    {"exclude 1,21,30", "wk2", 47.83, 22.54, 2.12, 0.04, 3.02, 92.65},
    {"exclude 1,21,30", "wk3", 18.33, 17.62, 1.04, 0.30, -16.70, 53.36},
    {"exclude 1,21,30", "wk4", 28.89, 23.57, 1.23, 0.22, -17.98, 75.76},
    {"exclude 1,21,30", "natl", -14.40, 15.55, -0.93, 0.36, -45.32, 16.53},
    {"exclude 1,21,30", "wknd", 11.68, 16.80, 0.69, 0.49, -21.72, 45.09},
}};

struct JbRow {
    double jb;
    double printed_p;
    double expected_p;  // exp(-jb / 2) to four places
};

// Entire data, then the two excluded cases.
inline constexpr std::array<JbRow, 3> kNormalityRows = {{{7.27, 0.03, 0.0264}, {5.97, 0.05, 0.0504}, {6.05, 0.05, 0.0486}}};

}  // namespace published
