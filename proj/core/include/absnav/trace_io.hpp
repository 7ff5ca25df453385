#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "absnav/episode.hpp"
#include "absnav/mlp.hpp"

namespace absnav {

/// Line-delimited JSON: one header object ({"type":"episode",...}) followed by
/// one {"type":"step",...} object per record.
void write_trace(const EpisodeTrace& trace, std::ostream& out);
[[nodiscard]] EpisodeTrace read_trace(std::istream& in);
void export_trace(const EpisodeTrace& trace, const std::filesystem::path& path);
[[nodiscard]] EpisodeTrace import_trace(const std::filesystem::path& path);

/// Position lattice, inclusive of both ends.
struct GridSpec {
  double x_min = -1.0;
  double x_max = 7.0;
  double y_min = -3.0;
  double y_max = 3.0;
  double resolution = 0.1;

  [[nodiscard]] int nx() const;
  [[nodiscard]] int ny() const;
  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(nx()) * static_cast<std::size_t>(ny());
  }
};

struct GridCell {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

/// Fixed world for value landscapes: three obstacles between the origin and a
/// goal at (6.5, 0).
[[nodiscard]] WorldConfig three_obstacle_world();

/// Value of a robot placed at each lattice point with fixed heading and twist,
/// observing the world's obstacles and goal with exact rays. Row-major in y,
/// then x.
[[nodiscard]] std::vector<GridCell> value_grid(const MlpParams& value_net, const WorldConfig& world,
                                               const TwistCommand& twist, double heading,
                                               const GridSpec& spec);

/// CSV with header x,y,value.
void write_grid(const std::vector<GridCell>& cells, std::ostream& out);
void export_grid(const MlpParams& value_net, const WorldConfig& world, const TwistCommand& twist,
                 double heading, const GridSpec& spec, const std::filesystem::path& path);

}  // namespace absnav
