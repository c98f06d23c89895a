#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "sigmmd/errors.hpp"
#include "sigmmd/path_io.hpp"
#include "sigmmd/preprocess.hpp"
#include "test_paths.hpp"

namespace sigmmd {
namespace {

TEST(PathIo, RoundTrip) {
    std::mt19937_64 gen(1);
    PathBatch batch = testing::random_batch(gen, 3, 2, 4);
    batch.push_back(time_augment(Path::from_points({{1.0}, {2.5}})));
    EXPECT_EQ(paths_from_json(paths_to_json(batch)), batch);
    EXPECT_EQ(paths_from_json(paths_to_json(batch, 2)), batch);

    const auto file = std::filesystem::temp_directory_path() / "sigmmd_path_io_test.json";
    write_paths(file, batch);
    EXPECT_EQ(read_paths(file), batch);
    std::filesystem::remove(file);
}

TEST(PathIo, Errors) {
    EXPECT_THROW(paths_from_json("{not json"), DataError);
    EXPECT_THROW(paths_from_json(R"([{"dim":1,"times":[0,1],"values":[[0]]}])"), DataError);
    EXPECT_THROW(paths_from_json(R"([{"dim":1,"times":[1,0],"values":[[0],[1]]}])"), DataError);
    EXPECT_THROW(read_paths("/nonexistent/x.json"), DataError);
    EXPECT_TRUE(paths_from_json("[]").empty());
}

}  // namespace
}  // namespace sigmmd
