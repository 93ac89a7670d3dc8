// Writes every built-in preset as <dir>/<name>.json (default dir: configs).
#include <iostream>
#include <string>

#include <scnsyn/scnsyn.hpp>

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "configs";
    for (const auto& name : scnsyn::presets::names()) {
        const auto path = dir + "/" + name + ".json";
        scnsyn::io::write_file(path, scnsyn::to_json(scnsyn::presets::get(name)).dump(2) + "\n");
        std::cout << path << "\n";
    }
}
