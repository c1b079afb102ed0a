// Regenerates the seeded fixture files under tests/data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "exrec/testing/fixtures.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Write the seeded fixture embeddings, corpus and profiles"};
  std::string out_dir = "tests/data";
  app.add_option("--out", out_dir, "Output directory");
  CLI11_PARSE(app, argc, argv);

  namespace fx = exrec::testing;
  const std::filesystem::path out(out_dir);
  try {
    write_file(out / "embeddings_50d.txt", fx::generate_embeddings());
    write_file(out / "corpus_100.json", fx::generate_corpus());
    write_file(out / "profile_graphs.json", fx::generate_profile("u-graphs", fx::kFixtureSeed + 2, {0, 2}, 3).dump(2) + "\n");
    write_file(out / "profile_nlp.json", fx::generate_profile("u-nlp", fx::kFixtureSeed + 3, {4, 1}, 2).dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cout << "fixtures written to " << out.string() << '\n';
  return 0;
}
