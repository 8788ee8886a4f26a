fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("MOMENT_SPECTRA_LOG")).init();
    std::process::exit(moment_spectra::cli::main_with_args(std::env::args_os()));
}
