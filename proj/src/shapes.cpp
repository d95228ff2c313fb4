#include "funcmark/shapes.hpp"

#include <sstream>
#include <vector>

#include "funcmark/errors.hpp"

namespace funcmark {

namespace {

std::vector<double> parse_args(const std::string& text) {
    std::vector<double> args;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            args.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw InvalidArgumentError("shape spec: bad number '" + item + "'");
        }
    }
    return args;
}

}  // namespace

std::shared_ptr<const ScalarField> make_shape(const std::string& spec) {
    std::string name = spec;
    std::vector<double> args;
    size_t colon = spec.find(':');
    if (colon != std::string::npos) {
        name = spec.substr(0, colon);
        args = parse_args(spec.substr(colon + 1));
    }

    if (name == "sphere") {
        if (args.empty()) return std::make_shared<SphereField>(Vec3{0, 0, 0}, 0.5);
        if (args.size() != 4)
            throw InvalidArgumentError("shape spec: sphere takes cx,cy,cz,r");
        return std::make_shared<SphereField>(Vec3{args[0], args[1], args[2]}, args[3]);
    }
    if (name == "torus") {
        if (args.empty()) return std::make_shared<TorusField>(Vec3{0, 0, 0}, 0.5, 0.2);
        if (args.size() != 5)
            throw InvalidArgumentError("shape spec: torus takes cx,cy,cz,R,r");
        return std::make_shared<TorusField>(Vec3{args[0], args[1], args[2]}, args[3], args[4]);
    }
    if (name == "blend") {
        if (!args.empty()) throw InvalidArgumentError("shape spec: blend takes no arguments");
        std::vector<std::shared_ptr<const ScalarField>> children{
            std::make_shared<SphereField>(Vec3{0.25, 0.0, 0.1}, 0.35),
            std::make_shared<TorusField>(Vec3{-0.15, 0.0, -0.05}, 0.4, 0.15),
        };
        return std::make_shared<SmoothUnionField>(std::move(children), 0.1);
    }
    throw InvalidArgumentError("shape spec: unknown shape '" + name + "'");
}

}  // namespace funcmark
