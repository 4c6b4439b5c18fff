fn main() -> std::process::ExitCode {
    hypertate::cli::main()
}
