use std::fs;
use std::path::Path;

#[test]
fn header_declares_the_abi() {
    let header = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fivedist.h")).unwrap();
    assert!(header.contains("#ifndef FIVEDIST_H"));
    assert!(header.contains("typedef struct FdPointSet FdPointSet;"));
    assert!(header.contains("FD_STATUS_NULL_POINTER = 1"));
    assert!(header.contains("FD_STATUS_PANIC = 9"));
    for name in [
        "fd_version",
        "fd_last_error_message",
        "fd_point_set_new",
        "fd_point_set_free",
        "fd_point_set_push",
        "fd_point_set_len",
        "fd_point_set_grid",
        "fd_point_set_get",
        "fd_point_set_read",
        "fd_point_set_write",
        "fd_prime_in_range",
        "fd_grid_distinct_distances",
        "fd_classify",
        "fd_count_forbidden",
        "fd_count_solution_quintuples",
        "fd_construct",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}
