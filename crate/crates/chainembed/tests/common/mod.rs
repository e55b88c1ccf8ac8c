/// Canonical messages as the server writes them and the trainer sends them.
pub const CORPUS: &[&str] = &[
    r#"{"cmd":"reset","logical":{"nodes":3,"edges":[[0,1],[1,2],[0,2]]},"hardware":{"m":1,"n":1,"l":4},"sigma":1.0,"guide":null,"seed":0}"#,
    r#"{"cmd":"reset","logical":{"ba":{"n":20,"d":2}},"hardware":{"m":8,"n":8,"l":4},"sigma":0.25,"guide":[3,1,0,2],"seed":17}"#,
    r#"{"cmd":"reset","logical":"graphs/ba_0.txt","hardware":{"m":16,"n":16,"l":4},"sigma":0.0,"guide":null,"seed":0}"#,
    r#"{"cmd":"step","action":3}"#,
    r#"{"cmd":"mask"}"#,
    r#"{"cmd":"close"}"#,
    r#"{"ok":true,"t":0,"reward":0.0,"done":false,"qubits":0,"hw_features":[],"chains":[],"mask":[true,true,true],"edges":[[0,1],[0,2],[1,2]]}"#,
    r#"{"ok":true,"t":2,"reward":-7.5,"done":false,"qubits":3,"hw_features":[[0,1],[4,2],[5,2]],"chains":[[1,[0]],[2,[4,5]]],"mask":[true,false,false]}"#,
    r#"{"ok":false,"error":"illegal_action"}"#,
    r#"{"ok":false,"error":"episode_done"}"#,
    r#"{"ok":false,"error":"no_episode"}"#,
    r#"{"ok":false,"error":"bad_request"}"#,
    r#"{"ok":false,"error":"bad_graph"}"#,
    r#"{"ok":false,"error":"invalid_parameter"}"#,
    r#"{"ok":false,"error":"hardware_exhausted"}"#,
    r#"{"ok":true}"#,
];
