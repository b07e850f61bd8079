fn main() {
    std::process::exit(hecke_grid::cli::run());
}
