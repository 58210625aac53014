fn main() {
    std::process::exit(orbit_atlas::cli::run());
}
