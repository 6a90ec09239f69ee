fn main() -> std::process::ExitCode {
    gauss_schemes::cli::main()
}
