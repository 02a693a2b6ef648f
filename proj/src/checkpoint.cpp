#include "dara/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dara/text_io.hpp"

namespace dara {

namespace {

struct TensorView {
  std::string name;
  std::string shape;
  std::size_t offset;
  std::size_t size;
};

std::vector<TensorView> tensor_layout(const Mlp& net) {
  std::vector<TensorView> views;
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const std::size_t in = net.dims()[l];
    const std::size_t out = net.dims()[l + 1];
    views.push_back({"W" + std::to_string(l), std::to_string(out) + "x" + std::to_string(in), net.weight_offset(l),
                     out * in});
    views.push_back({"b" + std::to_string(l), std::to_string(out), net.bias_offset(l), out});
  }
  return views;
}

void write_tensor(std::ostream& out, const std::string& name, const TensorView& view, std::span<const double> data) {
  out << name << ' ' << view.shape;
  for (std::size_t i = 0; i < view.size; ++i) out << ' ' << format_exact(data[view.offset + i]);
  out << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string_view> next(const char* what) {
    for (;;) {
      if (!std::getline(in_, line_)) throw CheckpointError(std::string("truncated checkpoint: missing ") + what);
      ++line_no_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      if (!trim(line_).empty()) break;
    }
    std::vector<std::string_view> tokens;
    for (auto token : split(line_, ' ')) {
      if (!token.empty()) tokens.push_back(token);
    }
    return tokens;
  }

  const std::string& raw() const { return line_; }
  std::size_t line_no() const { return line_no_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw CheckpointError("checkpoint line " + std::to_string(line_no_) + ": " + message);
  }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

double number(LineReader& reader, std::string_view token) {
  const auto value = parse_double(token);
  if (!value) reader.fail("malformed number '" + std::string(token) + "'");
  return *value;
}

void read_tensor(LineReader& reader, const std::string& name, const TensorView& view, std::span<double> data) {
  const auto tokens = reader.next(name.c_str());
  if (tokens.size() < 2 || tokens[0] != name) reader.fail("expected tensor " + name);
  if (tokens[1] != view.shape) {
    reader.fail("tensor " + name + " has shape " + std::string(tokens[1]) + ", expected " + view.shape);
  }
  if (tokens.size() != 2 + view.size) reader.fail("tensor " + name + " has the wrong number of values");
  for (std::size_t i = 0; i < view.size; ++i) data[view.offset + i] = number(reader, tokens[2 + i]);
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  const Mlp& net = ckpt.net;
  if (ckpt.adam.first_moment.size() != net.num_params() || ckpt.adam.second_moment.size() != net.num_params()) {
    throw CheckpointError("Adam moments do not match the network's parameter count");
  }
  out << kCheckpointMagic << '\n';
  for (std::size_t i = 0; i < net.dims().size(); ++i) out << (i ? " " : "") << net.dims()[i];
  out << '\n' << ckpt.train_step << ' ' << format_exact(ckpt.gamma) << '\n';
  const auto layout = tensor_layout(net);
  for (const auto& view : layout) write_tensor(out, view.name, view, net.params());
  out << "ADAM\n";
  out << ckpt.adam.step << ' ' << format_exact(ckpt.adam.learning_rate) << ' ' << format_exact(ckpt.adam.beta1) << ' '
      << format_exact(ckpt.adam.beta2) << ' ' << format_exact(ckpt.adam.epsilon) << '\n';
  for (const auto& view : layout) write_tensor(out, "m." + view.name, view, ckpt.adam.first_moment);
  for (const auto& view : layout) write_tensor(out, "v." + view.name, view, ckpt.adam.second_moment);
}

Checkpoint read_checkpoint(std::istream& in) {
  LineReader reader(in);
  reader.next("magic line");
  const auto magic = trim(reader.raw());
  if (magic != kCheckpointMagic) {
    if (magic.starts_with("DARA-CKPT ")) reader.fail("unsupported checkpoint version '" + std::string(magic) + "'");
    reader.fail("bad magic line, expected '" + std::string(kCheckpointMagic) + "'");
  }

  std::vector<std::size_t> dims;
  for (auto token : reader.next("layer dims")) {
    const auto value = parse_integer(token);
    if (!value || *value <= 0) reader.fail("layer dims must be positive integers");
    dims.push_back(static_cast<std::size_t>(*value));
  }
  if (dims.size() < 2) reader.fail("need at least two layer dims");

  const auto header = reader.next("train_step and gamma");
  if (header.size() != 2) reader.fail("expected '<train_step> <gamma>'");
  const auto step = parse_integer(header[0]);
  if (!step || *step < 0) reader.fail("train_step must be a non-negative integer");

  Checkpoint ckpt;
  ckpt.net = Mlp(dims);
  ckpt.train_step = static_cast<std::uint64_t>(*step);
  ckpt.gamma = number(reader, header[1]);

  const auto layout = tensor_layout(ckpt.net);
  for (const auto& view : layout) read_tensor(reader, view.name, view, ckpt.net.params());

  const auto section = reader.next("ADAM section");
  if (section.size() != 1 || section[0] != "ADAM") reader.fail("expected ADAM section");
  const auto adam_header = reader.next("Adam hyperparameters");
  if (adam_header.size() != 5) reader.fail("expected '<step> <lr> <beta1> <beta2> <epsilon>'");
  const auto adam_step_count = parse_integer(adam_header[0]);
  if (!adam_step_count || *adam_step_count < 0) reader.fail("Adam step must be a non-negative integer");
  ckpt.adam = AdamState(ckpt.net.num_params());
  ckpt.adam.step = static_cast<std::uint64_t>(*adam_step_count);
  ckpt.adam.learning_rate = number(reader, adam_header[1]);
  ckpt.adam.beta1 = number(reader, adam_header[2]);
  ckpt.adam.beta2 = number(reader, adam_header[3]);
  ckpt.adam.epsilon = number(reader, adam_header[4]);
  for (const auto& view : layout) read_tensor(reader, "m." + view.name, view, ckpt.adam.first_moment);
  for (const auto& view : layout) read_tensor(reader, "v." + view.name, view, ckpt.adam.second_moment);
  return ckpt;
}

void checkpoint_save(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint '" + path.string() + "'");
  write_checkpoint(out, ckpt);
  if (!out) throw CheckpointError("write failed for checkpoint '" + path.string() + "'");
}

Checkpoint checkpoint_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  try {
    return read_checkpoint(in);
  } catch (const CheckpointError& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }
}

}  // namespace dara
