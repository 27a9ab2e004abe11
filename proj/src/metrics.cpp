#include "absim/metrics.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace absim {

const char* const kMetricsHeader =
    "episode,cumulative_reward,mean_c_u,mean_c_j,secrecy_capacity,"
    "final_dx,final_dy,final_power,epsilon";

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

std::string metrics_to_csv(const std::vector<EpisodeMetrics>& rows) {
    std::string out(kMetricsHeader);
    out += '\n';
    for (const EpisodeMetrics& r : rows) {
        out += std::to_string(r.episode);
        out += ',';
        out += format_double(r.cumulative_reward);
        out += ',';
        out += format_double(r.mean_c_u);
        out += ',';
        out += format_double(r.mean_c_j);
        out += ',';
        out += format_double(r.secrecy_capacity);
        out += ',';
        out += format_double(r.final_dx);
        out += ',';
        out += format_double(r.final_dy);
        out += ',';
        out += format_double(r.final_power);
        out += ',';
        out += format_double(r.epsilon);
        out += '\n';
    }
    return out;
}

void write_metrics_csv(const std::string& path, const std::vector<EpisodeMetrics>& rows) {
    std::ofstream out(path, std::ios::binary);  // fixed newlines on every platform
    if (!out) throw std::runtime_error("write_metrics_csv: cannot open " + path);
    out << metrics_to_csv(rows);
    if (!out) throw std::runtime_error("write_metrics_csv: write failed for " + path);
}

}  // namespace absim
