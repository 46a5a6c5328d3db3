import { test } from "node:test";
import assert from "node:assert/strict";
import { BundleFormatError, parseBundle } from "../src/bundle.js";
import { fixtureNames, fixtureText, loadFixture } from "./helpers.js";
test("all fixtures parse", () => {
    assert.equal(fixtureNames().length, 10);
    for (const name of fixtureNames()) {
        const bundle = loadFixture(name);
        assert.equal(bundle.version, "ctl-evidence/1");
        assert.ok(Object.keys(bundle.combined).length >= 1);
    }
});
test("chain bundle has three states and two transitions", () => {
    const bundle = loadFixture("chain_eu");
    assert.equal(bundle.model.states.length, 3);
    assert.equal(bundle.model.transitions.length, 2);
});
test("corrupt json is rejected", () => {
    assert.throws(() => parseBundle("{ not json"), BundleFormatError);
});
test("wrong version is rejected", () => {
    assert.throws(() => parseBundle(JSON.stringify({ version: "nope" })), BundleFormatError);
});
test("dangling state reference is rejected", () => {
    const doc = JSON.parse(fixtureText("chain_eu"));
    const block = Object.values(doc.combined)[0];
    block.minimal.transitions.push(["a", "ghost"]);
    assert.throws(() => parseBundle(JSON.stringify(doc)), BundleFormatError);
});
test("dangling ast reference is rejected", () => {
    const doc = JSON.parse(fixtureText("chain_eu"));
    doc.ast.nodes[0].children = ["n999"];
    assert.throws(() => parseBundle(JSON.stringify(doc)), BundleFormatError);
});
test("combined block must stay a submodel", () => {
    const doc = JSON.parse(fixtureText("chain_eu"));
    const block = Object.values(doc.combined)[0];
    block.minimal.transitions.push(["c", "a"]); // not a model transition
    assert.throws(() => parseBundle(JSON.stringify(doc)), BundleFormatError);
});
test("sugar nodes carry core links", () => {
    const bundle = loadFixture("game_safe");
    const root = bundle.nodes[bundle.root];
    assert.equal(root.op, "AG");
    assert.notEqual(root.core, root.id);
    assert.equal(bundle.nodes[root.core].op, "not");
});
