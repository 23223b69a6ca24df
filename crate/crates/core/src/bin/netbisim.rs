fn main() -> std::process::ExitCode {
    netbisim::cli::main()
}
