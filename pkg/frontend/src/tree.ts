/** ARIA tree widget over the textual-structure artifact.
 *
 * Keyboard model: ArrowDown descends to the first child, ArrowUp ascends
 * to the parent, ArrowLeft/ArrowRight move between siblings; moves off an
 * edge are no-ops. Every focus change reports the focused node so the app
 * can emit its predicate as a selection.
 */

import type { TreeNode } from "./types.js";

interface Entry {
  node: TreeNode;
  item: HTMLElement;
  parent: Entry | null;
  children: Entry[];
}

export class TreeView {
  private readonly root: HTMLUListElement;
  private entries = new Map<string, Entry>();
  private focused: Entry | null = null;

  constructor(
    container: HTMLElement,
    private readonly onFocusNode: (node: TreeNode) => void,
  ) {
    this.root = document.createElement("ul");
    this.root.setAttribute("role", "tree");
    this.root.setAttribute("aria-label", "Textual structure");
    this.root.addEventListener("keydown", (e) => this.onKey(e));
    container.appendChild(this.root);
  }

  get currentNode(): TreeNode | null {
    return this.focused ? this.focused.node : null;
  }

  render(tree: TreeNode): void {
    const previous = this.focused ? this.focused.node.id : null;
    this.root.replaceChildren();
    this.entries.clear();
    this.focused = null;
    this.addEntry(tree, this.root, null);
    // Keep focus on the same node across re-renders when it still exists.
    const keep = previous !== null ? this.entries.get(previous) : undefined;
    this.setFocus(keep ?? this.entries.get(tree.id) ?? null, false, false);
  }

  /** Move DOM focus to the current tree item (the `o` shortcut target). */
  focus(): void {
    if (this.focused) this.focused.item.focus();
  }

  focusNodeById(id: string, emit = true): void {
    const entry = this.entries.get(id);
    if (entry) this.setFocus(entry, emit, true);
  }

  private addEntry(node: TreeNode, list: HTMLElement, parent: Entry | null): Entry {
    const item = document.createElement("li");
    item.setAttribute("role", "treeitem");
    item.id = `tree-${node.id}`;
    item.tabIndex = -1;
    item.dataset.nodeId = node.id;
    item.dataset.role = node.role;

    const label = document.createElement("span");
    label.className = "tree-label";
    label.textContent = node.description;
    item.appendChild(label);

    const entry: Entry = { node, item, parent, children: [] };
    this.entries.set(node.id, entry);
    if (parent) parent.children.push(entry);

    item.addEventListener("click", (e) => {
      e.stopPropagation();
      this.setFocus(entry, true, true);
    });

    if (node.children.length > 0) {
      item.setAttribute("aria-expanded", "true");
      const group = document.createElement("ul");
      group.setAttribute("role", "group");
      item.appendChild(group);
      for (const child of node.children) this.addEntry(child, group, entry);
    }
    list.appendChild(item);
    return entry;
  }

  private setFocus(entry: Entry | null, emit: boolean, moveDomFocus: boolean): void {
    if (!entry) return;
    if (this.focused) this.focused.item.tabIndex = -1;
    this.focused = entry;
    entry.item.tabIndex = 0;
    if (moveDomFocus) entry.item.focus();
    if (emit) this.onFocusNode(entry.node);
  }

  private onKey(e: KeyboardEvent): void {
    const cur = this.focused;
    if (!cur) return;
    let next: Entry | null = null;
    switch (e.key) {
      case "ArrowDown":
        next = cur.children[0] ?? null;
        break;
      case "ArrowUp":
        next = cur.parent;
        break;
      case "ArrowLeft":
        next = this.sibling(cur, -1);
        break;
      case "ArrowRight":
        next = this.sibling(cur, +1);
        break;
      default:
        return; // unbound keys pass through
    }
    e.preventDefault();
    e.stopPropagation();
    if (next) this.setFocus(next, true, true);
  }

  private sibling(entry: Entry, delta: number): Entry | null {
    if (!entry.parent) return null;
    const sibs = entry.parent.children;
    const i = sibs.indexOf(entry);
    return sibs[i + delta] ?? null;
  }
}
