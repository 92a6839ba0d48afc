// pattern: P4 inline-func
// expected: no-deadlock
package main

import "fmt"

func main() {
	ch := make(chan string)
	go func() {
		ch <- "hello"
	}()
	func() {
		fmt.Println(<-ch)
	}()
}
