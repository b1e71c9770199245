// ptnls <mode> --config <file> [--out <dir>] [--workers k]
#include "ptnls/config.hpp"
#include "ptnls/jobs.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"PT-symmetric coupled NLS: blowup criteria and radial simulations"};
    std::string modeName;
    std::string configPath;
    std::string outDir;
    int workers = 0;
    app.add_option("mode", modeName, "criteria | simulate | sweep | figure | convergence")
        ->required()
        ->check(CLI::IsMember({"criteria", "simulate", "sweep", "figure", "convergence"}));
    app.add_option("--config", configPath, "key = value run configuration")->required();
    app.add_option("--out", outDir, "output directory (overrides output.dir)");
    app.add_option("--workers", workers, "concurrent sweep sub-jobs")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(configPath);
    if (!in) {
        std::cerr << "error: cannot read " << configPath << '\n';
        return ptnls::exit_code(ptnls::ErrorKind::IoError);
    }
    std::stringstream buf;
    buf << in.rdbuf();

    ptnls::JobSpec spec;
    try {
        spec = ptnls::parse_config(buf.str());
    } catch (const ptnls::Error& e) {
        std::cerr << configPath << ": " << e.what() << '\n';
        return ptnls::exit_code(e.kind());
    }
    spec.mode = *ptnls::parse_mode(modeName);
    if (!outDir.empty()) spec.outputDir = outDir;
    if (workers > 0) spec.workers = workers;
    return ptnls::run_job(spec, std::cerr);
}
