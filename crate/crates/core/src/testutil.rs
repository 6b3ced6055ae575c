//! Shared fixtures for unit and integration tests.

use crate::energy::AircraftClass;
use crate::instance::{Flight, Instance, Node, NodeKind};

/// Worked two-flight fixture: stands 500 m and 800 m from the depot, 400 m
/// apart, one charger, medium aircraft, windows [10, 20] and [40, 55].
pub fn golden_fixture() -> Instance {
    let nodes = vec![
        Node {
            id: 0,
            kind: NodeKind::Depot,
            x_m: 0.0,
            y_m: 0.0,
            stand_group: None,
        },
        Node {
            id: 1,
            kind: NodeKind::Stand,
            x_m: 500.0,
            y_m: 0.0,
            stand_group: Some(0),
        },
        // placed so that d(depot, B) = 800 and d(A, B) = 400 exactly
        Node {
            id: 2,
            kind: NodeKind::Stand,
            x_m: 730.0,
            y_m: (107_100.0_f64).sqrt(),
            stand_group: Some(1),
        },
        Node {
            id: 3,
            kind: NodeKind::Charger,
            x_m: 300.0,
            y_m: -200.0,
            stand_group: None,
        },
    ];
    let flights = vec![
        Flight {
            id: 0,
            stand_node: 1,
            class: AircraftClass::Medium,
            scheduled_arrival_min: 5.0,
            scheduled_departure_min: 65.0,
            window_open_min: 10.0,
            window_close_min: 20.0,
        },
        Flight {
            id: 1,
            stand_node: 2,
            class: AircraftClass::Medium,
            scheduled_arrival_min: 35.0,
            scheduled_departure_min: 95.0,
            window_open_min: 40.0,
            window_close_min: 55.0,
        },
    ];
    Instance::from_layout("golden-2flight", nodes, flights)
}

/// Five stands, one charger (node 6), staggered generous windows.
pub fn five_stand_fixture() -> Instance {
    let mut nodes = vec![Node {
        id: 0,
        kind: NodeKind::Depot,
        x_m: 0.0,
        y_m: 0.0,
        stand_group: None,
    }];
    let mut flights = Vec::new();
    for i in 0..5usize {
        nodes.push(Node {
            id: i + 1,
            kind: NodeKind::Stand,
            x_m: 400.0 + 150.0 * i as f64,
            y_m: if i % 2 == 0 { 300.0 } else { -300.0 },
            stand_group: Some(i as u32),
        });
        flights.push(Flight {
            id: i as u32,
            stand_node: i + 1,
            class: AircraftClass::Medium,
            scheduled_arrival_min: 20.0 + 40.0 * i as f64,
            scheduled_departure_min: 120.0 + 40.0 * i as f64,
            window_open_min: 25.0 + 40.0 * i as f64,
            window_close_min: 80.0 + 40.0 * i as f64,
        });
    }
    nodes.push(Node {
        id: 6,
        kind: NodeKind::Charger,
        x_m: 600.0,
        y_m: 0.0,
        stand_group: None,
    });
    Instance::from_layout("five-stands", nodes, flights)
}
