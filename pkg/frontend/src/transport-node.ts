/** Node-only TCP transport for tests and tooling (not part of the bundle). */

import { createConnection, type Socket } from "node:net";

import { LineSplitter, type LineTransport } from "./transport";

export class TcpTransport implements LineTransport {
  private lineHandler: (line: string) => void = () => {};
  private closeHandler: () => void = () => {};
  private readonly splitter = new LineSplitter((line) => this.lineHandler(line));

  constructor(private readonly socket: Socket) {
    socket.setEncoding("utf-8");
    socket.on("data", (chunk: string) => this.splitter.push(chunk));
    socket.on("close", () => this.closeHandler());
    socket.on("error", () => this.closeHandler());
  }

  sendLine(line: string): void {
    this.socket.write(line + "\n");
  }

  close(): void {
    this.socket.end();
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }
}

export function connectTcp(host: string, port: number): Promise<TcpTransport> {
  return new Promise((resolve, reject) => {
    const socket = createConnection({ host, port }, () =>
      resolve(new TcpTransport(socket)),
    );
    socket.once("error", reject);
  });
}
