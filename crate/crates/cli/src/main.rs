fn main() {
    std::process::exit(atlas_cli::main_with_args(std::env::args_os()));
}
