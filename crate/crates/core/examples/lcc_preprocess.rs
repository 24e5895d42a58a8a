// Read an edge list, keep its largest connected component, and intersect
// components across two graphs.

use graphstats::graph::{
    export_edge_list, import_edge_list, largest_connected_component, multigraph_lcc_intersection,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let text = "# a triangle, a pair and a lone edge\na,b\nb,c\nc,a\nd,e\n";
    let g = import_edge_list(text, false)?;
    let (lcc, kept) = largest_connected_component(&g)?;
    println!("{} nodes, largest component keeps {:?}", g.n(), kept);
    print!("{}", export_edge_list(&lcc)?);

    let h = import_edge_list("a,b\nb,c\nd,e\ne,a\n", false)?;
    let (both, common) = multigraph_lcc_intersection(&[g, h])?;
    println!(
        "nodes in every largest component: {common:?} ({} graphs)",
        both.len()
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
