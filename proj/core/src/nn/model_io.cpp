#include "shm/nn/model_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "shm/errors.hpp"
#include "shm/text_format.hpp"

namespace shm::nn {

namespace {

void write_tensor(std::ostream& out, const char* name, std::span<const double> values) {
    out << name << ' ' << values.size();
    for (double v : values) {
        out << ' ' << format_double(v);
    }
    out << '\n';
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::vector<std::string> next(const char* expecting) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            auto t = trim(line);
            if (t.empty() || t.front() == '#') {
                continue;
            }
            std::vector<std::string> tokens;
            std::istringstream ss{std::string(t)};
            std::string tok;
            while (ss >> tok) {
                tokens.push_back(tok);
            }
            return tokens;
        }
        throw ConfigError(std::string("model file truncated: expected ") + expecting);
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("model file line " + std::to_string(line_no_) + ": " + what);
    }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

double keyed_value(LineReader& reader, const std::string& key) {
    auto tokens = reader.next(key.c_str());
    if (tokens.size() != 2 || tokens[0] != key) {
        reader.fail("expected '" + key + " <value>'");
    }
    try {
        return parse_double(tokens[1]);
    } catch (const DataError& e) {
        reader.fail(e.what());
    }
}

std::map<std::string, std::string> layer_attributes(LineReader& reader, const std::string& kind) {
    auto tokens = reader.next(("layer " + kind).c_str());
    if (tokens.size() < 2 || tokens[0] != "layer" || tokens[1] != kind) {
        reader.fail("expected layer '" + kind + "'");
    }
    std::map<std::string, std::string> attrs;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
        auto eq = tokens[i].find('=');
        if (eq == std::string::npos) {
            reader.fail("malformed layer attribute '" + tokens[i] + "'");
        }
        attrs[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
    }
    return attrs;
}

std::size_t attr_size(LineReader& reader, const std::map<std::string, std::string>& attrs,
                      const std::string& key) {
    auto it = attrs.find(key);
    if (it == attrs.end()) {
        reader.fail("layer attribute '" + key + "' missing");
    }
    try {
        auto v = parse_int(it->second);
        if (v <= 0) {
            reader.fail("layer attribute '" + key + "' must be positive");
        }
        return static_cast<std::size_t>(v);
    } catch (const DataError& e) {
        reader.fail(e.what());
    }
}

void read_tensor(LineReader& reader, const char* name, std::vector<double>& dst) {
    auto tokens = reader.next(name);
    if (tokens.size() < 2 || tokens[0] != name) {
        reader.fail(std::string("expected tensor '") + name + "'");
    }
    std::size_t declared = 0;
    try {
        declared = static_cast<std::size_t>(parse_int(tokens[1]));
    } catch (const DataError& e) {
        reader.fail(e.what());
    }
    if (declared != dst.size()) {
        reader.fail(std::string("tensor '") + name + "' declares " + std::to_string(declared) +
                    " values, layer shape needs " + std::to_string(dst.size()));
    }
    if (tokens.size() != declared + 2) {
        reader.fail(std::string("tensor '") + name + "' truncated: " + std::to_string(tokens.size() - 2) +
                    " of " + std::to_string(declared) + " values present");
    }
    try {
        for (std::size_t i = 0; i < declared; ++i) {
            dst[i] = parse_double(tokens[i + 2]);
        }
    } catch (const DataError& e) {
        reader.fail(e.what());
    }
}

}  // namespace

void write_model(std::ostream& out, const Network& net, const ModelMetadata& metadata,
                 const std::vector<std::string>& comments) {
    const auto& conv = net.conv();
    const auto& hidden = net.hidden();
    const auto& output = net.output();
    out << kModelMagic << ' ' << kModelVersion << '\n';
    for (const auto& c : comments) {
        out << "# " << c << '\n';
    }
    out << "learning_rate " << format_double(metadata.adam.learning_rate) << '\n';
    out << "beta1 " << format_double(metadata.adam.beta1) << '\n';
    out << "beta2 " << format_double(metadata.adam.beta2) << '\n';
    out << "adam_epsilon " << format_double(metadata.adam.epsilon) << '\n';
    out << "bce_clip " << format_double(metadata.bce_clip) << '\n';
    out << "seed " << metadata.seed << '\n';
    out << "layer conv1d filters=" << conv.filter_count << " in_channels=" << conv.in_channels
        << " kernel=" << conv.kernel_size << " activation=" << activation_name(conv.activation) << '\n';
    write_tensor(out, "weights", conv.weights);
    write_tensor(out, "biases", conv.biases);
    out << "layer maxpool1d pool=" << kPoolSize << '\n';
    out << "layer flatten\n";
    for (const DenseLayer* d : {&hidden, &output}) {
        out << "layer dense in=" << d->in_dim << " out=" << d->out_dim
            << " activation=" << activation_name(d->activation) << '\n';
        write_tensor(out, "weights", d->weights);
        write_tensor(out, "biases", d->biases);
    }
    out << "end\n";
}

StoredModel read_model(std::istream& in) {
    LineReader reader(in);
    auto header = reader.next("header");
    if (header.empty() || header[0] != kModelMagic) {
        reader.fail(std::string("not a model file (expected '") + kModelMagic + " " + kModelVersion + "')");
    }
    if (header.size() != 2 || header[1] != kModelVersion) {
        const std::string found = header.size() > 1 ? header[1] : "<none>";
        throw ConfigError("model file version " + found + " is not supported (expected " +
                          kModelVersion + ")");
    }

    StoredModel model;
    model.metadata.adam.learning_rate = keyed_value(reader, "learning_rate");
    model.metadata.adam.beta1 = keyed_value(reader, "beta1");
    model.metadata.adam.beta2 = keyed_value(reader, "beta2");
    model.metadata.adam.epsilon = keyed_value(reader, "adam_epsilon");
    model.metadata.bce_clip = keyed_value(reader, "bce_clip");
    {
        auto tokens = reader.next("seed");
        if (tokens.size() != 2 || tokens[0] != "seed") {
            reader.fail("expected 'seed <value>'");
        }
        std::istringstream ss(tokens[1]);
        if (!(ss >> model.metadata.seed) || !ss.eof()) {
            reader.fail("seed is not an unsigned integer");
        }
    }

    auto conv_attrs = layer_attributes(reader, "conv1d");
    Conv1DLayer conv(attr_size(reader, conv_attrs, "filters"), attr_size(reader, conv_attrs, "in_channels"),
                     attr_size(reader, conv_attrs, "kernel"),
                     activation_from_name(conv_attrs.count("activation") ? conv_attrs["activation"] : ""));
    read_tensor(reader, "weights", conv.weights);
    read_tensor(reader, "biases", conv.biases);
    auto pool_attrs = layer_attributes(reader, "maxpool1d");
    if (attr_size(reader, pool_attrs, "pool") != kPoolSize) {
        reader.fail("only pool size 2 is supported");
    }
    layer_attributes(reader, "flatten");

    std::vector<DenseLayer> dense;
    for (int i = 0; i < 2; ++i) {
        auto attrs = layer_attributes(reader, "dense");
        DenseLayer d(attr_size(reader, attrs, "in"), attr_size(reader, attrs, "out"),
                     activation_from_name(attrs.count("activation") ? attrs["activation"] : ""));
        read_tensor(reader, "weights", d.weights);
        read_tensor(reader, "biases", d.biases);
        dense.push_back(std::move(d));
    }
    auto tail = reader.next("end");
    if (tail.size() != 1 || tail[0] != "end") {
        reader.fail("expected 'end'");
    }

    model.network.conv() = std::move(conv);
    model.network.hidden() = std::move(dense[0]);
    model.network.output() = std::move(dense[1]);
    model.network.validate_shapes();
    return model;
}

void save_model(const std::filesystem::path& path, const Network& net, const ModelMetadata& metadata,
                const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open model file for writing: " + path.string());
    }
    write_model(out, net, metadata, comments);
    if (!out) {
        throw IoError("failed writing model file: " + path.string());
    }
}

StoredModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open model file: " + path.string());
    }
    return read_model(in);
}

}  // namespace shm::nn
