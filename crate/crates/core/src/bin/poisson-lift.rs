fn main() {
    std::process::exit(poisson_lift::cli::main_from_env());
}
