#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

namespace tailsim::nn {

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Versioned binary store of named double tensors. Round-trips bitwise.
class Checkpoint {
  public:
    static constexpr char kMagic[9] = "TSIMCKP1";

    std::map<std::string, Eigen::MatrixXd> tensors;

    void put(const std::string& name, const Eigen::MatrixXd& t) { tensors[name] = t; }
    void put(const std::string& name, const Eigen::VectorXd& v) {
        tensors[name] = Eigen::MatrixXd(v);
    }
    void put_scalar(const std::string& name, double v) {
        tensors[name] = Eigen::MatrixXd::Constant(1, 1, v);
    }

    bool has(const std::string& name) const { return tensors.count(name) > 0; }

    const Eigen::MatrixXd& get(const std::string& name) const {
        auto it = tensors.find(name);
        if (it == tensors.end())
            throw CheckpointError("checkpoint: missing tensor '" + name + "'");
        return it->second;
    }
    Eigen::VectorXd get_vector(const std::string& name) const {
        const Eigen::MatrixXd& m = get(name);
        return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    }
    double get_scalar(const std::string& name) const { return get(name)(0, 0); }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw CheckpointError("checkpoint: cannot write " + path);
        out.write(kMagic, 8);
        write_u64(out, tensors.size());
        for (const auto& [name, t] : tensors) {
            write_u64(out, name.size());
            out.write(name.data(), static_cast<std::streamsize>(name.size()));
            write_u64(out, static_cast<std::uint64_t>(t.rows()));
            write_u64(out, static_cast<std::uint64_t>(t.cols()));
            out.write(reinterpret_cast<const char*>(t.data()),
                      static_cast<std::streamsize>(sizeof(double) * t.size()));
        }
        if (!out) throw CheckpointError("checkpoint: write failed for " + path);
    }

    static Checkpoint load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw CheckpointError("checkpoint: cannot open " + path);
        char magic[8];
        in.read(magic, 8);
        if (!in || std::string(magic, 8) != std::string(kMagic, 8))
            throw CheckpointError("checkpoint: bad magic in " + path);
        Checkpoint ckpt;
        std::uint64_t count = read_u64(in);
        for (std::uint64_t i = 0; i < count; ++i) {
            std::uint64_t name_len = read_u64(in);
            std::string name(name_len, '\0');
            in.read(name.data(), static_cast<std::streamsize>(name_len));
            std::uint64_t rows = read_u64(in), cols = read_u64(in);
            Eigen::MatrixXd t(rows, cols);
            in.read(reinterpret_cast<char*>(t.data()),
                    static_cast<std::streamsize>(sizeof(double) * t.size()));
            if (!in) throw CheckpointError("checkpoint: truncated file " + path);
            ckpt.tensors[name] = std::move(t);
        }
        return ckpt;
    }

  private:
    static void write_u64(std::ofstream& out, std::uint64_t v) {
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
    static std::uint64_t read_u64(std::ifstream& in) {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        return v;
    }
};

}  // namespace tailsim::nn
